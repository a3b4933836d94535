//! `lim F_n` is projective iff the dual tower `Hom(F_n, R)` is ML; in that
//! case `φ` splits and the splitting is built explicitly.

use crate::error::Result;
use crate::linalg::{mat_mul, EuclideanDomain, Mat};
use crate::module::FPModule;
use crate::tower::{ml_check, theorem13_harness, MLReport, Verdict, Witness};

use super::{hom_tower, phi_map, DirectSystem};

/// A map `ψ: F → F` with `ψ∘φ = Id`, truncated to its first `depth + 1`
/// column levels. Column block `m` is `ψ ε_m`; it has rows for levels
/// `1..=row_levels`, and every level beyond carries zero.
#[derive(Clone, Debug)]
pub struct Splitting<E> {
    pub depth: usize,
    pub row_levels: usize,
    pub psi: Mat<E>,
    /// `ψ φ` equals the inclusion of `⊕_{m ≤ depth} F_m` exactly.
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub enum Projectivity<R: EuclideanDomain> {
    Projective { dual: MLReport<R>, splitting: Splitting<R::Elem> },
    /// The dual image chain at `witness.level` descends strictly forever.
    NotProjective { dual: MLReport<R>, witness: Witness<R> },
    Undecided { dual: MLReport<R> },
}

impl<R: EuclideanDomain> Projectivity<R> {
    pub fn verdict(&self) -> Verdict {
        match self {
            Projectivity::Projective { .. } => Verdict::Stationary,
            Projectivity::NotProjective { .. } => Verdict::NotML,
            Projectivity::Undecided { .. } => Verdict::UndecidedAtDepth,
        }
    }

    pub fn dual(&self) -> &MLReport<R> {
        match self {
            Projectivity::Projective { dual, .. } | Projectivity::NotProjective { dual, .. } | Projectivity::Undecided { dual } => dual,
        }
    }
}

/// Builds `ψ` from row-finite solutions of `ψ_m - ψ_{m+1} f_m = ε_m` in the
/// dual tower, one per coordinate functional. `None` when the dual tower is not ML.
pub fn splitting<R: EuclideanDomain>(d: &DirectSystem<R>, depth: usize) -> Result<Option<Splitting<R::Elem>>> {
    let ring = d.ring();
    let dual = hom_tower(d, &FPModule::free(ring, 1))?;
    let rep = ml_check(&dual, depth);
    if rep.verdict != Verdict::Stationary {
        return Ok(None);
    }
    let depth = depth.max(1);
    let offset = rep.max_offset().expect("stationary");
    // solutions for targets at level n vanish below n - offset, so rows past
    // depth + 1 + offset never meet the first depth + 1 column levels
    let row_levels = depth + 1 + offset;
    let report = theorem13_harness(&dual, 1, row_levels)?;
    let rank = |n: usize| d.rank_at(n).expect("periodic");
    let rows: usize = (1..=row_levels).map(rank).sum();
    let cols = d.total_rank(depth + 1).expect("periodic");
    let mut psi = Mat::zeros(ring, rows, cols);
    let mut ok = report.all_verified;
    let mut row = 0;
    let mut certs = report.certificates.iter();
    for n in 1..=row_levels {
        for _ in 0..rank(n) {
            let cert = certs.next().expect("one certificate per generator");
            let mut col = 0;
            for m in 1..=depth + 1 {
                for (j, x) in cert.solution[m - 1].iter().enumerate() {
                    psi.set(row, col + j, x.clone());
                }
                col += rank(m);
            }
            row += 1;
        }
    }
    // dropped rows n > row_levels vanish on these columns because a solution
    // for a level-n target is zero below vanishing_from ≥ n - offset
    ok &= report
        .certificates
        .iter()
        .all(|c| c.level <= offset || c.vanishing_from.is_some_and(|v| v + offset >= c.level));
    let phi = phi_map(d, depth)?;
    let product = mat_mul(ring, &psi, &phi.matrix)?;
    let inclusion = Mat::from_fn(rows, phi.matrix.cols(), |i, j| if i == j { ring.one() } else { ring.zero() });
    ok &= product == inclusion;
    Ok(Some(Splitting { depth, row_levels, psi, verified: ok }))
}

pub fn projectivity_test<R: EuclideanDomain>(d: &DirectSystem<R>, depth: usize) -> Result<Projectivity<R>> {
    let dual_tower = hom_tower(d, &FPModule::free(d.ring(), 1))?;
    let dual = ml_check(&dual_tower, depth);
    Ok(match dual.verdict {
        Verdict::Stationary => {
            let splitting = splitting(d, depth)?.expect("stationary dual tower");
            Projectivity::Projective { dual, splitting }
        }
        Verdict::NotML => {
            let witness = dual.witness.clone().expect("NotML reports carry a witness");
            Projectivity::NotProjective { dual, witness }
        }
        Verdict::UndecidedAtDepth => Projectivity::Undecided { dual },
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::zmat;
    use super::super::SystemTail;
    use super::*;
    use crate::linalg::Integers;
    use num_bigint::BigInt;

    #[test]
    fn identity_system_splits() {
        let r = Integers;
        let d = DirectSystem::periodic(&r, zmat(&[&[1, 0], &[0, 1]])).unwrap();
        match projectivity_test(&d, 3).unwrap() {
            Projectivity::Projective { splitting, .. } => assert!(splitting.verified),
            p => panic!("{:?}", p.verdict()),
        }
    }

    #[test]
    fn eventually_identity_splits() {
        let r = Integers;
        let d = DirectSystem::new(
            &r,
            vec![1, 2],
            vec![zmat(&[&[2], &[1]])],
            SystemTail::Periodic { rank: 1, map: zmat(&[&[1]]), attach: Some(zmat(&[&[1, 3]])) },
        )
        .unwrap();
        match projectivity_test(&d, 4).unwrap() {
            Projectivity::Projective { splitting, .. } => assert!(splitting.verified),
            p => panic!("{:?}", p.verdict()),
        }
        // a zero map in the tail makes the colimit 0, still projective
        let d = DirectSystem::periodic(&r, zmat(&[&[0]])).unwrap();
        assert_eq!(projectivity_test(&d, 2).unwrap().verdict(), Verdict::Stationary);
    }

    #[test]
    fn telescopes_are_not_projective() {
        let r = Integers;
        let d = DirectSystem::periodic(&r, zmat(&[&[2]])).unwrap();
        match projectivity_test(&d, 5).unwrap() {
            Projectivity::NotProjective { witness, .. } => {
                for (j, v) in witness.chain.iter().enumerate() {
                    let g = v.generators();
                    assert_eq!(g.cols(), 1);
                    let x = g.at(0, 0).clone();
                    assert_eq!(if x < BigInt::from(0) { -x } else { x }, BigInt::from(1) << j);
                }
            }
            p => panic!("{:?}", p.verdict()),
        }
        let d = DirectSystem::periodic(&r, zmat(&[&[1, 0], &[0, 2]])).unwrap();
        match projectivity_test(&d, 5).unwrap() {
            Projectivity::NotProjective { witness, .. } => {
                let step = &witness.steps[1];
                let x = &step.element[1] % 4;
                assert!(x == BigInt::from(2) || x == BigInt::from(-2));
            }
            p => panic!("{:?}", p.verdict()),
        }
    }
}
