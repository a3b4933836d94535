//! Turning a (truncated) countable presentation of a flat module into a
//! direct system of finitely generated free modules.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cokernel_invariants, hermite, mat_mul, snf, solve_linear, EuclideanDomain, Mat};
use crate::module::{FPModule, Submodule};

use super::{DirectSystem, SystemTail};

/// `F = R^gens` modulo the span of the relation columns `g_1..g_K`.
#[derive(Clone, Debug)]
pub struct Presentation<R: EuclideanDomain> {
    ring: R,
    relations: Mat<R::Elem>,
}

impl<R: EuclideanDomain> Presentation<R> {
    pub fn new(ring: &R, gens: usize, relations: Mat<R::Elem>) -> Result<Self> {
        if gens == 0 {
            return Err(Error::InvalidInput("presentation needs at least one generator".into()));
        }
        if relations.rows() != gens {
            return Err(Error::DimensionMismatch(format!("relations have {} rows for {gens} generators", relations.rows())));
        }
        Ok(Presentation { ring: ring.clone(), relations })
    }

    pub fn gens(&self) -> usize {
        self.relations.rows()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.cols()
    }

    pub fn relations(&self) -> &Mat<R::Elem> {
        &self.relations
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FlatnessMode {
    /// Emit exactly the stages the data supports.
    Truncated,
    /// Repeat the last connecting map forever when the last two agree.
    ExtrapolateTail,
}

#[derive(Clone, Debug)]
pub struct Stage<E> {
    pub index: usize,
    /// `A_n = {1..support}`.
    pub support: usize,
    /// Rank of `P_n = F_{A_n} / Σ_{i≤n} g_i R`.
    pub rank: usize,
    /// `ρ` with `ρ ∘ (basis of Σ g_i R) = Id`, certifying the split.
    pub retraction: Mat<E>,
}

#[derive(Clone, Debug)]
pub enum JensenOutcome<R: EuclideanDomain> {
    System { system: DirectSystem<R>, stages: Vec<Stage<R::Elem>>, extrapolated: bool },
    /// The relation span at `stage` is not a summand of `F_{A_stage}`; `torsion` lists the
    /// non-unit invariant factors of the quotient.
    NotFlatEvidence { stage: usize, support: usize, torsion: Vec<R::Elem> },
}

fn supports<R: EuclideanDomain>(p: &Presentation<R>) -> Vec<usize> {
    let ring = p.ring();
    let k = p.relation_count();
    let stages = k.max(1);
    let mut out = Vec::with_capacity(stages);
    let mut a = 0;
    for n in 1..=stages {
        let highest = if n <= k {
            (0..p.gens()).rev().find(|&i| !ring.is_zero(p.relations.at(i, n - 1))).map_or(0, |i| i + 1)
        } else {
            0
        };
        a = a.max(n).max(highest).min(p.gens());
        out.push(a);
    }
    // the last stage covers every generator of the truncation
    *out.last_mut().expect("at least one stage") = p.gens();
    out
}

struct Coordinates<E> {
    /// `F_{A_n} → P_n`.
    pi: Mat<E>,
    /// `P_n → F_{A_n}` with `π σ = Id`.
    sigma: Mat<E>,
}

/// Greedy initial segments `A_n`, split checks by retraction, and the induced maps
/// `P_n → P_n+1` in bases made canonical by a Hermite normalization at each step.
pub fn jensen_system<R: EuclideanDomain>(p: &Presentation<R>, mode: FlatnessMode) -> Result<JensenOutcome<R>> {
    let ring = p.ring();
    let supp = supports(p);
    let mut stages = Vec::with_capacity(supp.len());
    let mut coords: Vec<Coordinates<R::Elem>> = Vec::with_capacity(supp.len());
    for (idx, &a) in supp.iter().enumerate() {
        let n = idx + 1;
        let used = n.min(p.relation_count());
        let g = Mat::from_fn(a, used, |i, j| p.relations.at(i, j).clone());
        let free = FPModule::free(ring, a);
        let basis = Submodule::new(&free, g.clone())?.compact().generators().clone();
        let bt = basis.transpose();
        let mut rows = Vec::with_capacity(basis.cols());
        for i in 0..basis.cols() {
            let e: Vec<R::Elem> = (0..basis.cols()).map(|j| if i == j { ring.one() } else { ring.zero() }).collect();
            match solve_linear(ring, &bt, &e)? {
                Some(row) => rows.push(row),
                None => {
                    let torsion = cokernel_invariants(ring, &g).factors.into_iter().filter(|d| !ring.is_unit(d)).collect();
                    return Ok(JensenOutcome::NotFlatEvidence { stage: n, support: a, torsion });
                }
            }
        }
        let retraction = Mat::from_rows(rows, a)?;
        let dec = snf(ring, &g);
        let s = dec.rank();
        let pi = Mat::from_fn(a - s, a, |i, j| dec.u.at(s + i, j).clone());
        let sigma = Mat::from_fn(a, a - s, |i, j| dec.u_inv.at(i, s + j).clone());
        stages.push(Stage { index: n, support: a, rank: a - s, retraction });
        coords.push(Coordinates { pi, sigma });
    }

    let mut maps = Vec::with_capacity(coords.len().saturating_sub(1));
    for n in 0..coords.len().saturating_sub(1) {
        let a_next = supp[n + 1];
        let lifted = Mat::from_fn(a_next, coords[n].sigma.cols(), |i, j| {
            if i < supp[n] {
                coords[n].sigma.at(i, j).clone()
            } else {
                ring.zero()
            }
        });
        let f = mat_mul(ring, &coords[n + 1].pi, &lifted)?;
        let (w, w_inv, h) = hermite(ring, &f);
        coords[n + 1].pi = mat_mul(ring, &w, &coords[n + 1].pi)?;
        coords[n + 1].sigma = mat_mul(ring, &coords[n + 1].sigma, &w_inv)?;
        maps.push(h);
    }

    let ranks: Vec<usize> = stages.iter().map(|s| s.rank).collect();
    let t = ranks.len();
    let periodic_tail = match mode {
        FlatnessMode::Truncated => None,
        FlatnessMode::ExtrapolateTail if t == 1 => Some(Mat::identity(ring, ranks[0])),
        FlatnessMode::ExtrapolateTail => {
            let last = &maps[t - 2];
            (t >= 3 && last.rows() == last.cols() && maps[t - 3] == *last).then(|| last.clone())
        }
    };
    let extrapolated = periodic_tail.is_some();
    let system = match periodic_tail {
        Some(map) if t == 1 => DirectSystem::new(
            ring,
            ranks.clone(),
            vec![],
            SystemTail::Periodic { rank: ranks[0], attach: Some(map.clone()), map },
        )?,
        Some(map) => {
            let prefix = ranks[..t - 1].to_vec();
            let prefix_maps = maps[..t - 2].to_vec();
            DirectSystem::new(ring, prefix, prefix_maps, SystemTail::Periodic { rank: ranks[t - 1], attach: Some(map.clone()), map })?
        }
        None => DirectSystem::new(ring, ranks, maps, SystemTail::Truncated)?,
    };
    Ok(JensenOutcome::System { system, stages, extrapolated })
}

#[cfg(test)]
mod tests {
    use super::super::tests::zmat;
    use super::super::{hom_tower, projectivity_test};
    use super::*;
    use crate::linalg::Integers;
    use crate::tower::{ml_check, Verdict};
    use num_bigint::BigInt;

    fn telescope(k: usize, c: i64) -> Presentation<Integers> {
        let rel = Mat::from_fn(k + 1, k, |i, j| {
            if i == j {
                BigInt::from(1)
            } else if i == j + 1 {
                BigInt::from(-c)
            } else {
                BigInt::from(0)
            }
        });
        Presentation::new(&Integers, k + 1, rel).unwrap()
    }

    #[test]
    fn telescope_round_trip() {
        let r = Integers;
        let JensenOutcome::System { system, extrapolated, stages } = jensen_system(&telescope(5, 2), FlatnessMode::ExtrapolateTail).unwrap() else {
            panic!("telescope presentations are flat");
        };
        assert!(extrapolated);
        assert!(stages.iter().all(|s| s.rank == 1));
        assert!(system.maps().iter().all(|f| *f == zmat(&[&[2]])));
        let reference = DirectSystem::periodic(&r, zmat(&[&[2]])).unwrap();
        assert_eq!(projectivity_test(&system, 3).unwrap().verdict(), Verdict::NotML);
        for c in [2, 4, 8, 3] {
            let m = FPModule::cyclic(&r, &BigInt::from(c));
            let ours = ml_check(&hom_tower(&system, &m).unwrap(), 0);
            let theirs = ml_check(&hom_tower(&reference, &m).unwrap(), 0);
            assert_eq!(ours.verdict, theirs.verdict);
            assert_eq!((1..8).map(|n| ours.l_at(n)).collect::<Vec<_>>(), (1..8).map(|n| theirs.l_at(n)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn torsion_is_not_flat() {
        let p = Presentation::new(&Integers, 1, zmat(&[&[2]])).unwrap();
        match jensen_system(&p, FlatnessMode::Truncated).unwrap() {
            JensenOutcome::NotFlatEvidence { stage, torsion, .. } => {
                assert_eq!(stage, 1);
                assert_eq!(torsion, vec![BigInt::from(2)]);
            }
            JensenOutcome::System { .. } => panic!("Z/2 is not flat"),
        }
    }

    #[test]
    fn no_relations_gives_a_constant_system() {
        let p = Presentation::new(&Integers, 3, Mat::zeros(&Integers, 3, 0)).unwrap();
        let JensenOutcome::System { system, .. } = jensen_system(&p, FlatnessMode::ExtrapolateTail).unwrap() else {
            panic!("free modules are flat");
        };
        assert_eq!(system.rank_at(7), Some(3));
        assert_eq!(system.map_at(4), Some(&Mat::identity(&Integers, 3)));
        let JensenOutcome::System { system, .. } = jensen_system(&p, FlatnessMode::Truncated).unwrap() else { unreachable!() };
        assert_eq!(system.available_depth(), Some(1));
    }
}
