//! Torsion test families `⊕ R/rR`, uniform stabilization against powers
//! `R/r^kR`, the sampled purity bridge and the Baer/projective consistency check.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::dirsys::{hom_tower, projectivity_test, DirectSystem, SystemTail};
use crate::error::{Error, Result};
use crate::linalg::{mat_mul, snf, EuclideanDomain, Mat};
use crate::module::{divisible_part, finite_mu_check, FPModule, MuVerdict};
use crate::tower::{ml_check, IndexSequence, Verdict};

#[derive(Clone, Debug)]
pub struct TorsionFamily<R: EuclideanDomain> {
    pub sample: Vec<R::Elem>,
    pub modules: Vec<FPModule<R>>,
    pub sum: FPModule<R>,
}

fn check_sample<R: EuclideanDomain>(ring: &R, sample: &[R::Elem]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    if let Some(bad) = sample.iter().find(|r| ring.is_zero(r) || ring.is_unit(r)) {
        return Err(Error::InvalidInput(format!("sample entry {bad} is zero or a unit")));
    }
    Ok(())
}

pub fn torsion_family<R: EuclideanDomain>(ring: &R, sample: &[R::Elem]) -> Result<TorsionFamily<R>> {
    check_sample(ring, sample)?;
    let modules: Vec<FPModule<R>> = sample.iter().map(|r| FPModule::cyclic(ring, r)).collect();
    let sum = FPModule::direct_sum(ring, &modules);
    Ok(TorsionFamily { sample: sample.to_vec(), modules, sum })
}

/// One row of the uniformity table: minimal indices against `R/r^kR`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerRow<E> {
    pub base: E,
    pub k: u32,
    pub modulus: E,
    pub verdict: Verdict,
    /// `l(m)` for `m = 1..=l.len()`, then `m + tail_shift`.
    pub l: Vec<usize>,
    pub tail_shift: Option<usize>,
    /// `max_m (l(m) - m)`.
    pub offset: Option<usize>,
}

/// `offset(k + period) = offset(k) + step` for every `k` in the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recurrence<E> {
    pub base: E,
    pub period: usize,
    pub step: usize,
    /// `offset(k)` for `k = 1..=escalation`, each computed exactly.
    pub offsets: Vec<usize>,
    pub checks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BaerOutcome<E> {
    /// Stabilization indices along a power family grow by a verified recurrence,
    /// so no single `l(m)` serves the whole direct sum.
    BaerNegative(Recurrence<E>),
    /// `uniform` covers every tested power; `offset_bound` is certified for every power of every base element.
    BaerConsistent { uniform: IndexSequence, offset_bound: usize },
    Undecided { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct BaerVerdict<E> {
    pub outcome: BaerOutcome<E>,
    pub rows: Vec<PowerRow<E>>,
    /// Every prime dividing the system's data divides some base element.
    pub full_prime_support: bool,
    pub missing_primes: Vec<E>,
}

impl<E> BaerVerdict<E> {
    pub fn is_negative(&self) -> bool {
        matches!(self.outcome, BaerOutcome::BaerNegative(_))
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self.outcome, BaerOutcome::BaerConsistent { .. })
    }
}

fn recurrence(offsets: &[usize]) -> Option<(usize, usize, usize)> {
    let n = offsets.len();
    (1..n).find_map(|period| {
        let checks = n - period;
        if checks < 2 {
            return None;
        }
        let step = offsets[period].checked_sub(offsets[0]).filter(|&s| s > 0)?;
        (0..checks).all(|k| offsets[k + period] == offsets[k] + step).then_some((period, step, checks))
    })
}

/// Nonzero invariant factors of `A^rank` for the tail map `A`; `None` for truncated systems.
fn eventual_factors<R: EuclideanDomain>(d: &DirectSystem<R>) -> Result<Option<Vec<R::Elem>>> {
    let ring = d.ring();
    let SystemTail::Periodic { map, rank, .. } = d.tail() else {
        return Ok(None);
    };
    let mut power = Mat::identity(ring, *rank);
    for _ in 0..(*rank).max(1) {
        power = mat_mul(ring, map, &power)?;
    }
    Ok(Some(snf(ring, &power).factors))
}

/// Primes dividing the entries of every map and the elementary divisors of the tail's eventual image.
pub fn relevant_primes<R: EuclideanDomain>(d: &DirectSystem<R>) -> Result<Vec<R::Elem>> {
    let ring = d.ring();
    let mut mats: Vec<Mat<R::Elem>> = d.maps().to_vec();
    if let SystemTail::Periodic { map, attach, .. } = d.tail() {
        mats.push(map.clone());
        mats.extend(attach.clone());
    }
    if let Some(factors) = eventual_factors(d)? {
        mats.push(Mat::diagonal(ring, &factors));
    }
    let mut primes = BTreeSet::new();
    for m in &mats {
        for x in m.entries() {
            if !ring.is_zero(x) && !ring.is_unit(x) {
                for p in ring.prime_divisors(x)? {
                    primes.insert(p.to_string());
                }
            }
        }
    }
    primes.into_iter().map(|s| ring.parse_elem(&s)).collect()
}

/// Whether stabilization offsets against `R/r^kR` are bounded independently of `k`.
///
/// Over the `p`-adic completion the tail map splits (Fitting) into a part where it
/// is invertible and a part where it is topologically nilpotent. Offsets stay bounded
/// exactly when the second part is genuinely nilpotent, which happens iff `r` is
/// coprime to every nonzero invariant factor of `A^rank`. Then every offset is at
/// most `explicit levels + rank`.
fn offsets_bounded<R: EuclideanDomain>(ring: &R, factors: &[R::Elem], r: &R::Elem) -> bool {
    factors.iter().all(|f| ring.is_unit(&ring.gcd(r, f)))
}

/// Minimal stabilization against `R/r^kR` for each base `r` and `k = 1..=escalation`.
pub fn baer_criterion<R: EuclideanDomain>(
    d: &DirectSystem<R>,
    base: &[R::Elem],
    escalation: u32,
    depth: usize,
) -> Result<BaerVerdict<R::Elem>> {
    let ring = d.ring();
    check_sample(ring, base)?;
    if escalation == 0 {
        return Err(Error::InvalidInput("escalation must be at least 1".into()));
    }
    let jobs: Vec<(usize, u32)> = (0..base.len()).flat_map(|i| (1..=escalation).map(move |k| (i, k))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, k)| -> Result<PowerRow<R::Elem>> {
            let modulus = ring.pow(&base[i], k);
            let rep = ml_check(&hom_tower(d, &FPModule::cyclic(ring, &modulus))?, depth);
            Ok(PowerRow {
                base: base[i].clone(),
                k,
                modulus,
                verdict: rep.verdict,
                offset: rep.max_offset(),
                l: rep.l.clone(),
                tail_shift: rep.tail_shift,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let primes = relevant_primes(d)?;
    let missing_primes: Vec<R::Elem> = primes.into_iter().filter(|p| !base.iter().any(|r| ring.divides(p, r))).collect();
    let full_prime_support = missing_primes.is_empty();

    let outcome = if let Some(row) = rows.iter().find(|r| r.verdict != Verdict::Stationary) {
        BaerOutcome::Undecided { reason: format!("tower against {} is {:?}", row.modulus, row.verdict) }
    } else {
        let per_base: Vec<Vec<usize>> = base
            .iter()
            .map(|r| rows.iter().filter(|row| &row.base == r).map(|row| row.offset.expect("stationary")).collect())
            .collect();
        let negative = base.iter().zip(&per_base).find_map(|(r, offsets)| {
            recurrence(offsets).map(|(period, step, checks)| Recurrence {
                base: r.clone(),
                period,
                step,
                offsets: offsets.clone(),
                checks,
            })
        });
        let factors = eventual_factors(d)?.expect("stationary rows come from periodic systems");
        let bounded: Vec<bool> = base.iter().map(|r| offsets_bounded(ring, &factors, r)).collect();
        let SystemTail::Periodic { rank, .. } = d.tail() else { unreachable!("stationary rows come from periodic systems") };
        let offset_bound = d.ranks().len() + (*rank).max(1);
        match negative {
            Some(rec) if !bounded[base.iter().position(|r| *r == rec.base).expect("base member")] => BaerOutcome::BaerNegative(rec),
            Some(rec) => BaerOutcome::Undecided { reason: format!("offsets along powers of {} look periodic but are provably bounded", rec.base) },
            None if bounded.iter().all(|b| *b) && per_base.iter().flatten().all(|&o| o <= offset_bound) => {
                let width = rows.iter().map(|r| r.l.len()).max().unwrap_or(0);
                let explicit = (1..=width)
                    .map(|m| rows.iter().map(|r| r.l.get(m - 1).copied().unwrap_or(m + r.tail_shift.expect("stationary"))).max().unwrap_or(m + 1))
                    .collect();
                let tail_shift = rows.iter().filter_map(|r| r.tail_shift).max().unwrap_or(1);
                BaerOutcome::BaerConsistent { uniform: IndexSequence { explicit, tail_shift }, offset_bound }
            }
            None if bounded.iter().all(|b| *b) => BaerOutcome::Undecided { reason: format!("an observed offset exceeds the bound {offset_bound}") },
            None => BaerOutcome::Undecided { reason: "offsets are unbounded but no recurrence shows inside the window".into() },
        }
    };
    Ok(BaerVerdict { outcome, rows, full_prime_support, missing_primes })
}

#[derive(Clone, Debug, Serialize)]
pub struct BridgeRow {
    pub probe: usize,
    /// Prefix length of the sample used.
    pub sample_len: usize,
    pub separated: bool,
    /// A nonzero kernel element when not separated.
    pub kernel_witness: Option<Vec<String>>,
    /// The kernel did not grow relative to the previous prefix.
    pub monotone: bool,
    /// The kernel shrank strictly relative to the previous prefix.
    pub strict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityBridgeReport {
    pub rows: Vec<BridgeRow>,
    /// Probes separated by the full sample.
    pub separated: Vec<bool>,
    pub monotone: bool,
    /// `∩_{r ≠ 0} rG` computed structurally is zero for every probe.
    pub structural_zero: bool,
}

/// `G → ∏_{r ∈ S} G/rG` for growing prefixes `S` of the sample.
pub fn purity_bridge<R: EuclideanDomain>(sample: &[R::Elem], probes: &[FPModule<R>]) -> Result<PurityBridgeReport> {
    let mut rows = Vec::new();
    let mut separated = Vec::with_capacity(probes.len());
    let mut structural_zero = true;
    for (i, g) in probes.iter().enumerate() {
        check_sample(g.ring(), sample)?;
        let mut previous = None;
        for len in 1..=sample.len() {
            let part = divisible_part(g, &sample[..len])?;
            structural_zero &= part.structural.is_zero();
            let kernel = part.sampled;
            let verdict = finite_mu_check(&sample[..len], g)?;
            let (monotone, strict) = match &previous {
                None => (true, false),
                Some(prev) => (kernel.is_subset(prev), !prev.is_subset(&kernel)),
            };
            let kernel_witness = match verdict {
                MuVerdict::Injective => None,
                MuVerdict::Kernel(x) => Some(x.iter().map(|e| e.to_string()).collect()),
            };
            rows.push(BridgeRow { probe: i, sample_len: len, separated: kernel_witness.is_none(), kernel_witness, monotone, strict });
            previous = Some(kernel);
        }
        separated.push(rows.last().is_some_and(|r| r.separated));
    }
    let monotone = rows.iter().all(|r| r.monotone);
    Ok(PurityBridgeReport { rows, separated, monotone, structural_zero })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Consistency {
    Consistent,
    /// Decisive verdicts disagree; this indicates a bug.
    Contradiction,
    /// A BaerConsistent verdict on a base that misses relevant primes.
    SampleDependent,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem34Report<E> {
    pub projectivity: Verdict,
    pub baer: BaerVerdict<E>,
    pub consistency: Consistency,
}

pub fn theorem34_consistency<R: EuclideanDomain>(
    d: &DirectSystem<R>,
    base: &[R::Elem],
    escalation: u32,
    depth: usize,
) -> Result<Theorem34Report<R::Elem>> {
    let projectivity = projectivity_test(d, depth)?.verdict();
    let baer = baer_criterion(d, base, escalation, depth)?;
    let consistency = match (projectivity, &baer.outcome) {
        (Verdict::Stationary, BaerOutcome::BaerNegative(_)) => Consistency::Contradiction,
        (Verdict::NotML, BaerOutcome::BaerConsistent { .. }) if baer.full_prime_support => Consistency::Contradiction,
        (Verdict::NotML, BaerOutcome::BaerConsistent { .. }) => Consistency::SampleDependent,
        (Verdict::Stationary, BaerOutcome::BaerConsistent { .. }) | (Verdict::NotML, BaerOutcome::BaerNegative(_)) => {
            Consistency::Consistent
        }
        _ => Consistency::Undecided,
    };
    Ok(Theorem34Report { projectivity, baer, consistency })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Integers;
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn periodic(rows: &[&[i64]]) -> DirectSystem<Integers> {
        let m = Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| z(x)).collect()).collect(), rows.len()).unwrap();
        DirectSystem::periodic(&Integers, m).unwrap()
    }

    #[test]
    fn families() {
        let r = Integers;
        assert_eq!(torsion_family(&r, &[z(2)]).unwrap().sum.render(), "Z/2");
        assert_eq!(torsion_family(&r, &[z(2), z(3), z(4)]).unwrap().sum.render(), "Z/2 ⊕ Z/12");
        assert_eq!(torsion_family(&r, &[z(6)]).unwrap().sum.render(), "Z/6");
        assert!(torsion_family(&r, &[z(1)]).is_err());
        assert!(torsion_family(&r, &[z(0)]).is_err());
    }

    #[test]
    fn power_families() {
        let v = baer_criterion(&periodic(&[&[1]]), &[z(2)], 3, 0).unwrap();
        match v.outcome {
            BaerOutcome::BaerConsistent { uniform, offset_bound } => {
                assert_eq!(uniform.at(4), 5);
                assert_eq!(offset_bound, 1);
            }
            o => panic!("{o:?}"),
        }
        let v = baer_criterion(&periodic(&[&[2]]), &[z(2)], 5, 0).unwrap();
        match &v.outcome {
            BaerOutcome::BaerNegative(rec) => {
                assert_eq!(rec.offsets, vec![1, 2, 3, 4, 5]);
                assert_eq!((rec.period, rec.step), (1, 1));
            }
            o => panic!("{o:?}"),
        }
        for row in &v.rows {
            assert!((1..6).all(|m| row.l.get(m - 1).copied().unwrap_or(m + row.tail_shift.unwrap()) == m + row.k as usize));
        }
        let v = baer_criterion(&periodic(&[&[3]]), &[z(2)], 5, 0).unwrap();
        assert!(v.is_consistent());
        assert!(!v.full_prime_support);
        assert_eq!(v.missing_primes, vec![z(3)]);
        let v = baer_criterion(&periodic(&[&[4]]), &[z(2)], 5, 0).unwrap();
        match &v.outcome {
            BaerOutcome::BaerNegative(rec) => assert_eq!((rec.period, rec.step), (2, 1)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn bridge() {
        let r = Integers;
        let rep = purity_bridge(&[z(6)], &[FPModule::cyclic(&r, &z(6))]).unwrap();
        assert_eq!(rep.separated, vec![true]);
        let rep = purity_bridge(&[z(2), z(3), z(5), z(7)], &[FPModule::free(&r, 1), FPModule::zero(&r)]).unwrap();
        assert_eq!(rep.separated, vec![false, true]);
        assert!(rep.monotone && rep.structural_zero);
        assert_eq!(rep.rows[1].kernel_witness.as_deref().map(|w| w[0].trim_start_matches('-').to_string()), Some("6".into()));
        assert!(rep.rows[1..4].iter().all(|r| r.strict));
    }

    #[test]
    fn consistency() {
        let id = periodic(&[&[1]]);
        assert_eq!(theorem34_consistency(&id, &[z(2)], 3, 2).unwrap().consistency, Consistency::Consistent);
        let rep = theorem34_consistency(&periodic(&[&[2]]), &[z(2)], 4, 2).unwrap();
        assert_eq!((rep.projectivity, rep.consistency), (Verdict::NotML, Consistency::Consistent));
        let rep = theorem34_consistency(&periodic(&[&[1, 0], &[0, 2]]), &[z(2)], 4, 2).unwrap();
        assert!(rep.baer.is_negative());
        assert_eq!(rep.consistency, Consistency::Consistent);
        let rep = theorem34_consistency(&periodic(&[&[3]]), &[z(2)], 4, 2).unwrap();
        assert_eq!(rep.consistency, Consistency::SampleDependent);
    }

    #[test]
    fn plateaus_are_not_consistency() {
        // charpoly x^2 + 2x - 4: 2 divides the constant term, so offsets for powers of 2 grow.
        let d = periodic(&[&[0, -1], &[-4, -2]]);
        let v = baer_criterion(&d, &[z(2)], 3, 0).unwrap();
        assert!(!v.is_consistent(), "{:?}", v.outcome);
        let v = baer_criterion(&d, &[z(2)], 10, 0).unwrap();
        assert!(v.is_negative(), "{:?}", v.outcome);
        let rep = theorem34_consistency(&d, &[z(2)], 3, 2).unwrap();
        assert_ne!(rep.consistency, Consistency::Contradiction);
    }

    #[test]
    fn observed_offsets_respect_the_certified_bound() {
        let cases: [&[&[i64]]; 4] = [&[&[1, 0], &[0, 1]], &[&[3, 1], &[0, 5]], &[&[0, 1], &[0, 0]], &[&[3]]];
        for rows in cases {
            let v = baer_criterion(&periodic(rows), &[z(2)], 6, 0).unwrap();
            let BaerOutcome::BaerConsistent { offset_bound, .. } = v.outcome else { panic!("{:?}", v.outcome) };
            assert!(v.rows.iter().all(|r| r.offset.unwrap() <= offset_bound));
        }
    }
}
