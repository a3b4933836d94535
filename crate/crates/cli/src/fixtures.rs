//! The curated suite: seven inputs plus a manifest of commands and the verdicts they must produce.

use std::path::Path;

use mltower::io::{InputJson, MatrixJson, ModuleJson, PresentationJson, SystemJson, SystemTailJson, TowerJson, TowerTailJson};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Run {
    /// Arguments after the program name; the input path is relative to the fixture directory.
    pub args: Vec<String>,
    pub verdict: String,
    pub status: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    pub name: String,
    pub file: String,
    pub description: String,
    #[serde(skip)]
    pub input: InputJson,
    pub runs: Vec<Run>,
}

fn m(rows: &[&[i64]]) -> MatrixJson {
    let cols = rows.first().map_or(0, |r| r.len());
    MatrixJson { rows: rows.len(), cols, entries: rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect() }
}

fn cyclic(n: i64) -> ModuleJson {
    ModuleJson { gens: 1, relations: m(&[&[n]]) }
}

fn periodic(map: &[&[i64]]) -> SystemJson {
    SystemJson { ranks: vec![], maps: vec![], tail: SystemTailJson::Periodic { rank: map.len(), map: m(map), attach: None } }
}

fn run(file: &str, verb: &str, extra: &[&str], verdict: &str, status: i32) -> Run {
    let mut args = vec![verb.to_string(), file.to_string()];
    args.extend(extra.iter().map(|s| s.to_string()));
    Run { args, verdict: verdict.into(), status }
}

fn fixture(name: &str, description: &str, input: InputJson, runs: &[(&str, &[&str], &str, i32)]) -> Fixture {
    let file = format!("{name}.json");
    Fixture {
        name: name.into(),
        description: description.into(),
        runs: runs.iter().map(|(verb, extra, verdict, status)| run(&file, verb, extra, verdict, *status)).collect(),
        file,
        input,
    }
}

pub fn suite() -> Vec<Fixture> {
    let z = Some("Z".to_string());
    let telescope = {
        let k = 5;
        let entries = (0..=k).map(|i| (0..k).map(|j| if i == j { "1" } else if i == j + 1 { "-2" } else { "0" }.to_string()).collect()).collect();
        PresentationJson { gens: k + 1, relations: MatrixJson { rows: k + 1, cols: k, entries } }
    };
    vec![
        fixture(
            "identity",
            "Z^2 with identity maps; the colimit is free. Carries a surjective tower Z/4 <- Z/8 <- Z/8 <- ... with tail map 3.",
            InputJson {
                ring: z.clone(),
                system: Some(periodic(&[&[1, 0], &[0, 1]])),
                module: Some(cyclic(4)),
                tower: Some(TowerJson {
                    prefix: vec![cyclic(4)],
                    maps: vec![],
                    tail: TowerTailJson::Periodic { module: cyclic(8), map: m(&[&[3]]), attach: Some(m(&[&[1]])) },
                }),
                ..Default::default()
            },
            &[
                ("tower-ml", &[], "Stationary", 0),
                ("tower-lim", &[], "Exact", 0),
                ("dirsys-projective", &[], "Projective", 0),
                ("dirsys-ext", &[], "Zero", 0),
                ("baer", &["--sample", "2"], "BaerConsistent", 0),
                ("consistency", &["--sample", "2"], "Consistent", 0),
            ],
        ),
        fixture(
            "eventually-identity",
            "Z -> Z^2 -> Z -> Z -> ... with maps (2,1), (1,3), then identities; the colimit is Z.",
            InputJson {
                ring: z.clone(),
                system: Some(SystemJson {
                    ranks: vec![1, 2],
                    maps: vec![m(&[&[2], &[1]])],
                    tail: SystemTailJson::Periodic { rank: 1, map: m(&[&[1]]), attach: Some(m(&[&[1, 3]])) },
                }),
                module: Some(cyclic(6)),
                ..Default::default()
            },
            &[
                ("dirsys-projective", &[], "Projective", 0),
                ("dirsys-ext", &[], "Zero", 0),
                ("baer", &["--sample", "2,3"], "BaerConsistent", 0),
                ("consistency", &["--sample", "2,3"], "Consistent", 0),
            ],
        ),
        fixture(
            "z-times-2",
            "Z -> Z -> ... with multiplication by 2; the colimit is Z[1/2].",
            InputJson { ring: z.clone(), system: Some(periodic(&[&[2]])), module: Some(cyclic(4)), ..Default::default() },
            &[
                ("dirsys-projective", &[], "NotProjective", 1),
                ("dirsys-ext", &[], "Zero", 0),
                ("baer", &["--sample", "2", "--escalation", "5"], "BaerNegative", 1),
                ("consistency", &["--sample", "2"], "Consistent", 0),
            ],
        ),
        fixture(
            "z-times-3",
            "Z -> Z -> ... with multiplication by 3; the colimit is Z[1/3].",
            InputJson { ring: z.clone(), system: Some(periodic(&[&[3]])), ..Default::default() },
            &[
                ("dirsys-projective", &[], "NotProjective", 1),
                ("baer", &["--sample", "3"], "BaerNegative", 1),
                ("consistency", &["--sample", "3"], "Consistent", 0),
            ],
        ),
        fixture(
            "diag-1-2",
            "Z^2 with diag(1,2); the colimit is Z + Z[1/2].",
            InputJson { ring: z.clone(), system: Some(periodic(&[&[1, 0], &[0, 2]])), ..Default::default() },
            &[
                ("dirsys-projective", &[], "NotProjective", 1),
                ("baer", &["--sample", "2", "--escalation", "4"], "BaerNegative", 1),
                ("consistency", &["--sample", "2"], "Consistent", 0),
            ],
        ),
        fixture(
            "telescope-presentation",
            "Generators e_1..e_6 with relations e_n - 2 e_(n+1), a truncation of Z[1/2].",
            InputJson { ring: z.clone(), presentation: Some(telescope), ..Default::default() },
            &[("jensen", &[], "System", 0), ("jensen", &["--mode", "truncated"], "System", 0)],
        ),
        fixture(
            "non-flat-presentation",
            "One generator killed by 2, i.e. Z/2.",
            InputJson { ring: z, presentation: Some(PresentationJson { gens: 1, relations: m(&[&[2]]) }), ..Default::default() },
            &[("jensen", &[], "NotFlatEvidence", 1)],
        ),
    ]
}

pub fn render_input(f: &Fixture) -> String {
    let mut s = serde_json::to_string_pretty(&f.input).expect("fixtures serialize");
    s.push('\n');
    s
}

pub fn render_manifest(suite: &[Fixture]) -> String {
    let mut s = serde_json::to_string_pretty(&serde_json::json!({ "fixtures": suite })).expect("manifest serializes");
    s.push('\n');
    s
}

/// Writes every fixture and `manifest.json`; returns the fixture count.
pub fn write_fixtures(dir: &Path) -> std::io::Result<usize> {
    std::fs::create_dir_all(dir)?;
    let suite = suite();
    for f in &suite {
        std::fs::write(dir.join(&f.file), render_input(f))?;
    }
    std::fs::write(dir.join("manifest.json"), render_manifest(&suite))?;
    Ok(suite.len())
}
