//! Batch front end: one verb, one JSON input, one JSON report on stdout and a
//! summary line on stderr.

pub mod fixtures;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mltower::baer::{baer_criterion, relevant_primes, theorem34_consistency, BaerOutcome, BaerVerdict, Consistency};
use mltower::dirsys::{ext1_colim, jensen_system, projectivity_test, Ext1Colim, FlatnessMode, JensenOutcome, Projectivity};
use mltower::io::{self, Caps, InputJson};
use mltower::linalg::{mat_mul, snf, EuclideanDomain, GfPoly, Integers, RingTag};
use mltower::module::{ext1, hom_module};
use mltower::tower::{lim_and_lim1, ml_check, LimValue, Verdict};
use mltower::{Error, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const DEFAULT_DEPTH: usize = 8;

/// Exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Decisive = 0,
    Negative = 1,
    Undecided = 2,
    InputError = 3,
}

#[derive(Parser, Debug)]
#[command(name = "mltower", version, about = "Mittag-Leffler towers, projectivity and Baer checks over Z and GF(p)[x]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON input file, or `-` for stdin.
    pub input: PathBuf,
    /// `Z` or `GF(p)[x]`; must agree with the input's `ring` field when both are given.
    #[arg(long)]
    pub ring: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Deep {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
}

#[derive(Args, Debug, Clone)]
pub struct BaerArgs {
    #[command(flatten)]
    pub deep: Deep,
    /// Comma-separated base elements; defaults to the primes occurring in the system.
    #[arg(long)]
    pub sample: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub escalation: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Truncated,
    Extrapolate,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Smith normal form of `matrix`.
    Snf(Common),
    /// Invariant factors of `module`.
    ModuleNormalForm(Common),
    /// Hom(`source`, `target`).
    Hom(Common),
    /// Ext¹(`source`, `target`).
    Ext(Common),
    /// Mittag-Leffler verdict for `tower`.
    TowerMl(Deep),
    /// lim and lim¹ of `tower` where decidable.
    TowerLim(Deep),
    /// Projectivity of the colimit of `system`.
    DirsysProjective(Deep),
    /// Vanishing of Ext¹(colim `system`, `module`^(copies)).
    DirsysExt {
        #[command(flatten)]
        deep: Deep,
        #[arg(long, default_value_t = 2)]
        copies: usize,
    },
    /// Direct system of free modules from `presentation`.
    Jensen {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Extrapolate)]
        mode: Mode,
    },
    /// Baer criterion for `system` against powers of the sample.
    Baer(BaerArgs),
    /// Projectivity and Baer verdicts side by side.
    Consistency(BaerArgs),
    /// Write the curated fixture suite and its manifest to a directory.
    Fixtures { dir: PathBuf },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Snf(_) => "snf",
            Command::ModuleNormalForm(_) => "module-normal-form",
            Command::Hom(_) => "hom",
            Command::Ext(_) => "ext",
            Command::TowerMl(_) => "tower-ml",
            Command::TowerLim(_) => "tower-lim",
            Command::DirsysProjective(_) => "dirsys-projective",
            Command::DirsysExt { .. } => "dirsys-ext",
            Command::Jensen { .. } => "jensen",
            Command::Baer(_) => "baer",
            Command::Consistency(_) => "consistency",
            Command::Fixtures { .. } => "fixtures",
        }
    }

    fn common(&self) -> Option<&Common> {
        match self {
            Command::Snf(c) | Command::ModuleNormalForm(c) | Command::Hom(c) | Command::Ext(c) | Command::Jensen { common: c, .. } => Some(c),
            Command::TowerMl(d) | Command::TowerLim(d) | Command::DirsysProjective(d) | Command::DirsysExt { deep: d, .. } => Some(&d.common),
            Command::Baer(b) | Command::Consistency(b) => Some(&b.deep.common),
            Command::Fixtures { .. } => None,
        }
    }

    fn depth(&self) -> Option<usize> {
        match self {
            Command::TowerMl(d) | Command::TowerLim(d) | Command::DirsysProjective(d) | Command::DirsysExt { deep: d, .. } => Some(d.depth),
            Command::Baer(b) | Command::Consistency(b) => Some(b.deep.depth),
            _ => None,
        }
    }

    /// Everything besides the input path that influences the result.
    fn parameters(&self, ring: &str) -> Value {
        let mut p = json!({ "ring": ring });
        if let Some(d) = self.depth() {
            p["depth"] = json!(d);
        }
        match self {
            Command::DirsysExt { copies, .. } => p["copies"] = json!(copies),
            Command::Jensen { mode, .. } => p["mode"] = json!(format!("{mode:?}").to_lowercase()),
            Command::Baer(b) | Command::Consistency(b) => {
                p["escalation"] = json!(b.escalation);
                p["sample"] = json!(b.sample);
            }
            _ => {}
        }
        p
    }
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: Status,
}

/// Caps from `MLTOWER_MAX_DIM` and `MLTOWER_MAX_DEPTH`, falling back to the defaults.
pub fn caps_from_env() -> Result<Caps> {
    let mut caps = Caps::default();
    for (var, slot) in [("MLTOWER_MAX_DIM", &mut caps.max_dim), ("MLTOWER_MAX_DEPTH", &mut caps.max_depth)] {
        if let Ok(v) = std::env::var(var) {
            *slot = v.trim().parse().map_err(|_| Error::InvalidInput(format!("{var}={v:?} is not a non-negative integer")))?;
        }
    }
    Ok(caps)
}

pub fn run(args: &[String]) -> Outcome {
    match caps_from_env() {
        Ok(caps) => run_with(args, &caps),
        Err(e) => failure(None, &e),
    }
}

pub fn run_with(args: &[String], caps: &Caps) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { Status::InputError } else { Status::Decisive };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, status }
            } else {
                Outcome { stdout: text, stderr: String::new(), status }
            };
        }
    };
    if let Command::Fixtures { dir } = &cli.command {
        return match fixtures::write_fixtures(dir) {
            Ok(n) => Outcome { stdout: String::new(), stderr: format!("fixtures: wrote {n} fixtures and manifest.json to {}\n", dir.display()), status: Status::Decisive },
            Err(e) => Outcome { stdout: String::new(), stderr: format!("fixtures: {e}\n"), status: Status::InputError },
        };
    }
    let verb = cli.command.verb();
    let common = cli.command.common().expect("input verbs carry an input");
    let bytes = match read_input(&common.input) {
        Ok(b) => b,
        Err(e) => return failure(Some(verb), &e),
    };
    match execute(&cli.command, &bytes, caps) {
        Ok((report, verdict, status)) => Outcome {
            stdout: render(&report),
            stderr: format!("{verb}: {verdict} (status {})\n", status as i32),
            status,
        },
        Err(e) => failure(Some(verb), &e),
    }
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>> {
    use std::io::Read;
    let mut buf = Vec::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut buf).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_end(&mut buf)).map(|_| ())
    };
    res.map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(buf)
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::ResourceCap(_) => "resource_cap",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::RingMismatch => "ring_mismatch",
        Error::NotWellDefined(_) => "not_well_defined",
        Error::NotInjective => "not_injective",
        Error::NotPure(_) => "not_pure",
        Error::Diagram(_) => "diagram",
        Error::FieldInstance => "field_instance",
        Error::Empty(_) => "empty",
        Error::IncompatibleTails(_) => "incompatible_tails",
        Error::InvalidInput(_) => "invalid_input",
    }
}

fn failure(verb: Option<&str>, e: &Error) -> Outcome {
    let report = json!({ "verb": verb, "error": { "kind": error_kind(e), "message": e.to_string() } });
    Outcome {
        stdout: render(&report),
        stderr: format!("{}: error: {e} (status 3)\n", verb.unwrap_or("mltower")),
        status: Status::InputError,
    }
}

/// Runs one input verb on raw input bytes. Returns the report, a one-word verdict and the status.
pub fn execute(cmd: &Command, bytes: &[u8], caps: &Caps) -> Result<(Value, String, Status)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(format!("input is not UTF-8: {e}")))?;
    let input = io::parse_input(text)?;
    let common = cmd.common().ok_or_else(|| Error::InvalidInput("verb takes no input".into()))?;
    let tag = match (&common.ring, &input.ring) {
        (Some(a), Some(b)) if RingTag::parse(a)? != RingTag::parse(b)? => {
            return Err(Error::InvalidInput(format!("--ring {a} disagrees with input ring {b}")));
        }
        (Some(a), _) => a.clone(),
        (None, Some(b)) => b.clone(),
        (None, None) => "Z".to_string(),
    };
    if let Some(d) = cmd.depth() {
        caps.check_depth(d)?;
    }
    if let Command::DirsysExt { copies, .. } = cmd {
        caps.check_dim("copies", *copies)?;
    }
    let (result, verdict, status) = match RingTag::parse(&tag)? {
        RingTag::Integers => dispatch(&Integers, "2", cmd, &input, caps)?,
        RingTag::GfPoly(p) => dispatch(&GfPoly::new(p)?, "x", cmd, &input, caps)?,
    };
    let canonical = RingTag::parse(&tag).map(|t| match t {
        RingTag::Integers => "Z".to_string(),
        RingTag::GfPoly(p) => format!("GF({p})[x]"),
    })?;
    let report = json!({
        "verb": cmd.verb(),
        "verdict": verdict,
        "status": status as i32,
        "result": result,
        "provenance": {
            "input_sha256": hex::encode(Sha256::digest(bytes)),
            "version": env!("CARGO_PKG_VERSION"),
            "parameters": cmd.parameters(&canonical),
        },
    });
    Ok((report, verdict, status))
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Stationary => Status::Decisive,
        Verdict::NotML => Status::Negative,
        Verdict::UndecidedAtDepth => Status::Undecided,
    }
}

fn verdict_name(v: Verdict) -> String {
    format!("{v:?}")
}

fn baer_json<E: Clone + ToString>(b: &BaerVerdict<E>) -> Value {
    let outcome = match &b.outcome {
        BaerOutcome::BaerNegative(r) => json!({
            "kind": "BaerNegative",
            "base": r.base.to_string(),
            "period": r.period,
            "step": r.step,
            "offsets": r.offsets,
            "checks": r.checks,
        }),
        BaerOutcome::BaerConsistent { uniform, offset_bound } => json!({ "kind": "BaerConsistent", "uniform": uniform, "offset_bound": offset_bound }),
        BaerOutcome::Undecided { reason } => json!({ "kind": "Undecided", "reason": reason }),
    };
    json!({
        "outcome": outcome,
        "rows": b.rows.iter().map(|r| json!({
            "base": r.base.to_string(),
            "k": r.k,
            "modulus": r.modulus.to_string(),
            "verdict": r.verdict,
            "l": r.l,
            "tail_shift": r.tail_shift,
            "offset": r.offset,
        })).collect::<Vec<_>>(),
        "full_prime_support": b.full_prime_support,
        "missing_primes": report::elems(&b.missing_primes),
    })
}

fn baer_name<E>(b: &BaerVerdict<E>) -> (&'static str, Status) {
    match b.outcome {
        BaerOutcome::BaerNegative(_) => ("BaerNegative", Status::Negative),
        BaerOutcome::BaerConsistent { .. } => ("BaerConsistent", Status::Decisive),
        BaerOutcome::Undecided { .. } => ("Undecided", Status::Undecided),
    }
}

fn base_sample<R: EuclideanDomain>(ring: &R, fallback: &str, d: &mltower::dirsys::DirectSystem<R>, sample: &Option<String>) -> Result<Vec<R::Elem>> {
    match sample {
        Some(s) => io::parse_elements(ring, s),
        None => {
            let primes = relevant_primes(d)?;
            if primes.is_empty() {
                Ok(vec![ring.parse_elem(fallback)?])
            } else {
                Ok(primes)
            }
        }
    }
}

fn dispatch<R: EuclideanDomain>(ring: &R, fallback: &str, cmd: &Command, input: &InputJson, caps: &Caps) -> Result<(Value, String, Status)> {
    let done = |v: Value| Ok((v, "Computed".to_string(), Status::Decisive));
    match cmd {
        Command::Snf(_) => {
            let a = io::decode_matrix(ring, io::require(&input.matrix, "matrix")?, caps)?;
            let s = snf(ring, &a);
            let verified = mat_mul(ring, &mat_mul(ring, &s.u, &a)?, &s.v)? == s.d;
            done(json!({
                "u": report::mat(&s.u),
                "v": report::mat(&s.v),
                "d": report::mat(&s.d),
                "rank": s.rank(),
                "invariant_factors": report::elems(&s.factors),
                "verified": verified,
            }))
        }
        Command::ModuleNormalForm(_) => {
            let m = io::decode_module(ring, io::require(&input.module, "module")?, caps)?;
            done(json!({ "module": report::module(&m) }))
        }
        Command::Hom(_) | Command::Ext(_) => {
            let m = io::decode_module(ring, io::require(&input.source, "source")?, caps)?;
            let n = io::decode_module(ring, io::require(&input.target, "target")?, caps)?;
            if matches!(cmd, Command::Hom(_)) {
                let h = hom_module(&m, &n)?;
                done(json!({
                    "hom": report::module(h.module()),
                    "generator_maps": h.generator_maps().iter().map(|f| report::mat(f.matrix())).collect::<Vec<_>>(),
                }))
            } else {
                done(json!({ "ext1": report::module(&ext1(&m, &n)?) }))
            }
        }
        Command::TowerMl(d) => {
            let t = io::decode_tower(ring, io::require(&input.tower, "tower")?, caps)?;
            let r = ml_check(&t, d.depth);
            Ok((report::ml(&r), verdict_name(r.verdict), verdict_status(r.verdict)))
        }
        Command::TowerLim(d) => {
            let t = io::decode_tower(ring, io::require(&input.tower, "tower")?, caps)?;
            let r = lim_and_lim1(&t, d.depth)?;
            let exact = matches!(r.lim, LimValue::Exact(_)) && matches!(r.lim1, LimValue::Exact(_));
            let (verdict, status) = if exact { ("Exact", Status::Decisive) } else { ("Undecided", Status::Undecided) };
            Ok((
                json!({ "ml": r.ml, "lim": report::lim_value(&r.lim), "lim1": report::lim_value(&r.lim1) }),
                verdict.to_string(),
                status,
            ))
        }
        Command::DirsysProjective(d) => {
            let sys = io::decode_system(ring, io::require(&input.system, "system")?, caps)?;
            let p = projectivity_test(&sys, d.depth)?;
            let (verdict, status) = match p {
                Projectivity::Projective { .. } => ("Projective", Status::Decisive),
                Projectivity::NotProjective { .. } => ("NotProjective", Status::Negative),
                Projectivity::Undecided { .. } => ("Undecided", Status::Undecided),
            };
            Ok((report::projectivity(&p), verdict.to_string(), status))
        }
        Command::DirsysExt { deep, copies } => {
            let sys = io::decode_system(ring, io::require(&input.system, "system")?, caps)?;
            let m = io::decode_module(ring, io::require(&input.module, "module")?, caps)?;
            match ext1_colim(&sys, &m, *copies, deep.depth)? {
                Ext1Colim::Zero { stabilization_offset, certificates } => Ok((
                    json!({
                        "ext1": "Zero",
                        "stabilization_offset": stabilization_offset,
                        "window": certificates.window,
                        "all_verified": certificates.all_verified,
                        "certificates": certificates.certificates.iter().map(report::certificate).collect::<Vec<_>>(),
                    }),
                    "Zero".to_string(),
                    Status::Decisive,
                )),
                Ext1Colim::Undecided { verdict, obstruction } => Ok((
                    json!({ "ext1": "Undecided", "ml": verdict, "obstruction": obstruction.as_ref().map(report::obstruction) }),
                    "Undecided".to_string(),
                    Status::Undecided,
                )),
            }
        }
        Command::Jensen { mode, .. } => {
            let p = io::decode_presentation(ring, io::require(&input.presentation, "presentation")?, caps)?;
            let mode = match mode {
                Mode::Truncated => FlatnessMode::Truncated,
                Mode::Extrapolate => FlatnessMode::ExtrapolateTail,
            };
            match jensen_system(&p, mode)? {
                JensenOutcome::System { system, stages, extrapolated } => Ok((
                    json!({
                        "system": io::encode_system(&system),
                        "extrapolated": extrapolated,
                        "stages": stages.iter().map(|s| json!({
                            "index": s.index,
                            "support": s.support,
                            "rank": s.rank,
                            "retraction": report::mat(&s.retraction),
                        })).collect::<Vec<_>>(),
                    }),
                    "System".to_string(),
                    Status::Decisive,
                )),
                JensenOutcome::NotFlatEvidence { stage, support, torsion } => Ok((
                    json!({ "stage": stage, "support": support, "torsion": report::elems(&torsion) }),
                    "NotFlatEvidence".to_string(),
                    Status::Negative,
                )),
            }
        }
        Command::Baer(b) | Command::Consistency(b) => {
            let sys = io::decode_system(ring, io::require(&input.system, "system")?, caps)?;
            let base = base_sample(ring, fallback, &sys, &b.sample)?;
            caps.check_dim("sample", base.len())?;
            if matches!(cmd, Command::Baer(_)) {
                let v = baer_criterion(&sys, &base, b.escalation, b.deep.depth)?;
                let (name, status) = baer_name(&v);
                let mut out = baer_json(&v);
                out["base"] = report::elems(&base);
                Ok((out, name.to_string(), status))
            } else {
                let r = theorem34_consistency(&sys, &base, b.escalation, b.deep.depth)?;
                let status = match r.consistency {
                    Consistency::Consistent => Status::Decisive,
                    Consistency::Contradiction => Status::Negative,
                    Consistency::SampleDependent | Consistency::Undecided => Status::Undecided,
                };
                Ok((
                    json!({
                        "base": report::elems(&base),
                        "projectivity": r.projectivity,
                        "baer": baer_json(&r.baer),
                        "consistency": r.consistency,
                    }),
                    format!("{:?}", r.consistency),
                    status,
                ))
            }
        }
        Command::Fixtures { .. } => Err(Error::InvalidInput("fixtures takes no input".into())),
    }
}
