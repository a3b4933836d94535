//! Checks that tie the hom towers of a direct system to `Hom(φ, M^(N))`,
//! sums and products, pure submodules and the split case.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::matrix::{vec_add, vec_scale, vec_sub};
use crate::linalg::{rank, EuclideanDomain};
use crate::module::{is_pure_submodule, pure_intersection_check, FPModule, ModuleMap, PurityVerdict, Submodule};
use crate::tower::{
    ml_check, prop12_check, theorem13_harness, tower_product, tower_sum, IndexSequence, MLReport, ObstructionProfile,
    Prop12Report, Theorem13Report, Tower, Verdict,
};

use super::projective::{projectivity_test, splitting, Projectivity};
use super::{hom_tower, DirectSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    Holds,
    Fails,
    Undecided,
}

impl Condition {
    fn from_ml(v: Verdict) -> Self {
        match v {
            Verdict::Stationary => Condition::Holds,
            Verdict::NotML => Condition::Fails,
            Verdict::UndecidedAtDepth => Condition::Undecided,
        }
    }

    fn decided(self) -> Option<bool> {
        match self {
            Condition::Holds => Some(true),
            Condition::Fails => Some(false),
            Condition::Undecided => None,
        }
    }
}

fn agree(conds: &[Condition]) -> bool {
    let decided: Vec<bool> = conds.iter().filter_map(|c| c.decided()).collect();
    decided.windows(2).all(|w| w[0] == w[1])
}

#[derive(Clone, Debug)]
pub struct Cor23Report<R: EuclideanDomain> {
    /// `Hom(φ, M^(copies))` onto.
    pub surjective: Condition,
    /// The hom tower is ML.
    pub ml: Condition,
    /// Sampled diagonal maps factor through `φ`.
    pub diagonal_factorization: Condition,
    pub sampled_diagonals: usize,
    pub consistent: bool,
    pub tower_report: MLReport<R>,
    pub certificates: Theorem13Report<R>,
}

/// Sample diagonal data `γ_n ∈ Hom(F_n, M)`: the all-ones tuple and a rotating unit vector.
fn diagonal_samples<R: EuclideanDomain>(t: &Tower<R>, depth: usize) -> Vec<Vec<Vec<R::Elem>>> {
    let ring = t.ring();
    let level = |n: usize| t.module_at(n).expect("periodic");
    let ones = (1..=depth).map(|n| level(n).reduce(&vec![ring.one(); level(n).gens()])).collect();
    let rotating = (1..=depth)
        .map(|n| {
            let h = level(n);
            if h.gens() == 0 {
                vec![]
            } else {
                h.unit_vector((n - 1) % h.gens())
            }
        })
        .collect();
    vec![ones, rotating]
}

/// Solves `ψ φ = γ` copy by copy from the single-copy certificates and checks
/// `ψ_m - λ_m ψ_{m+1} = γ_m` (in copy `m`, zero elsewhere) on the window.
fn factor_diagonal<R: EuclideanDomain>(t: &Tower<R>, single: &Theorem13Report<R>, gamma: &[Vec<R::Elem>]) -> bool {
    let ring = t.ring();
    let level = |n: usize| t.module_at(n).expect("periodic");
    let window = single.window;
    gamma.iter().enumerate().all(|(idx, g)| {
        let n = idx + 1;
        let mut a: Vec<Vec<R::Elem>> = (1..=window + 1).map(|m| level(m).zero_elem()).collect();
        for cert in single.certificates.iter().filter(|c| c.level == n) {
            for (m, part) in cert.solution.iter().enumerate() {
                a[m] = vec_add(ring, &a[m], &vec_scale(ring, &g[cert.generator], part));
            }
        }
        (1..=window).all(|m| {
            let image = t.map_at(m).expect("periodic").apply(&a[m]).expect("length");
            let diff = vec_sub(ring, &a[m - 1], &image);
            let want = if m == n { g.clone() } else { level(m).zero_elem() };
            level(m).elems_equal(&diff, &want)
        })
    })
}

/// Surjectivity of `Hom(φ, M^(copies))`, ML of `Hom(F_n, M)` and factorization of
/// diagonal maps, each established by its own construction and compared.
pub fn cor23_battery<R: EuclideanDomain>(
    d: &DirectSystem<R>,
    m: &FPModule<R>,
    depth: usize,
    copies: usize,
) -> Result<Cor23Report<R>> {
    let t = hom_tower(d, m)?;
    let tower_report = ml_check(&t, depth);
    let ml = Condition::from_ml(tower_report.verdict);
    let certificates = theorem13_harness(&t, copies.max(1), depth)?;
    let surjective = match certificates.verdict {
        Verdict::Stationary if certificates.all_verified => Condition::Holds,
        _ => Condition::Undecided,
    };
    let (diagonal_factorization, sampled_diagonals) = if tower_report.verdict == Verdict::Stationary {
        let single = theorem13_harness(&t, 1, depth)?;
        let samples = diagonal_samples(&t, depth.max(1));
        let ok = samples.par_iter().all(|g| factor_diagonal(&t, &single, g));
        (if ok && single.all_verified { Condition::Holds } else { Condition::Undecided }, samples.len())
    } else {
        (Condition::Undecided, 0)
    };
    let consistent = agree(&[surjective, ml, diagonal_factorization]);
    Ok(Cor23Report { surjective, ml, diagonal_factorization, sampled_diagonals, consistent, tower_report, certificates })
}

#[derive(Clone, Debug)]
pub enum Ext1Colim<R: EuclideanDomain> {
    /// Every generator target of `Δ` on `Hom(F_n, M)^(copies)` has a verified row-finite preimage.
    Zero { stabilization_offset: usize, certificates: Theorem13Report<R> },
    Undecided { verdict: Verdict, obstruction: Option<ObstructionProfile<R::Elem>> },
}

impl<R: EuclideanDomain> Ext1Colim<R> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Ext1Colim::Zero { .. })
    }
}

/// `Ext¹(lim F_n, M^(copies))` through surjectivity of `Hom(φ, M^(copies))`.
pub fn ext1_colim<R: EuclideanDomain>(d: &DirectSystem<R>, m: &FPModule<R>, copies: usize, depth: usize) -> Result<Ext1Colim<R>> {
    let t = hom_tower(d, m)?;
    let certificates = theorem13_harness(&t, copies.max(1), depth)?;
    if certificates.verdict == Verdict::Stationary && certificates.all_verified {
        let stabilization_offset = ml_check(&t, depth).max_offset().expect("stationary");
        return Ok(Ext1Colim::Zero { stabilization_offset, certificates });
    }
    Ok(Ext1Colim::Undecided { verdict: certificates.verdict, obstruction: certificates.obstruction })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Examples24Report {
    pub split: Option<bool>,
    /// When `φ` splits, the hom tower is ML for every test module.
    pub split_implies_ml: Option<bool>,
    /// ML against `⊕_{n ≤ d} F_n` produced a verified splitting.
    pub converse_splitting: Option<bool>,
    /// Finite test modules give ML towers.
    pub finite_members_ml: bool,
    pub injective_maps: bool,
    /// For a torsion-free divisible `M`, `Hom(f_n, M)` is onto at every level.
    pub divisible_connecting_surjective: Option<bool>,
    /// `ext1_colim` against each finite test module.
    pub finite_members_ext_zero: Vec<bool>,
}

/// The split, Σ-pure-injective, injective and Ext cases on one system.
pub fn examples24_suite<R: EuclideanDomain>(d: &DirectSystem<R>, family: &[FPModule<R>], depth: usize) -> Result<Examples24Report> {
    let ring = d.ring();
    let proj = projectivity_test(d, depth)?;
    let split = match &proj {
        Projectivity::Projective { splitting, .. } => Some(splitting.verified),
        Projectivity::NotProjective { .. } => Some(false),
        Projectivity::Undecided { .. } => None,
    };
    let verdicts = family
        .par_iter()
        .map(|m| hom_tower(d, m).map(|t| ml_check(&t, depth).verdict))
        .collect::<Result<Vec<_>>>()?;
    let split_implies_ml = (split == Some(true)).then(|| verdicts.iter().all(|v| *v == Verdict::Stationary));

    let levels = d.ranks().len().max(1);
    let big = FPModule::free(ring, d.total_rank(levels).ok_or(Error::InvalidInput("no levels".into()))?);
    let converse_splitting = match ml_check(&hom_tower(d, &big)?, depth).verdict {
        Verdict::Stationary => Some(splitting(d, depth)?.is_some_and(|s| s.verified)),
        _ => None,
    };

    let finite: Vec<usize> = (0..family.len()).filter(|&i| family[i].is_finite()).collect();
    let finite_members_ml = finite.iter().all(|&i| verdicts[i] == Verdict::Stationary);
    let finite_members_ext_zero = finite
        .iter()
        .map(|&i| ext1_colim(d, &family[i], 1, depth).map(|e| e.is_zero()))
        .collect::<Result<Vec<_>>>()?;

    // over the fraction field, Hom(f_n, M) = f_nᵀ is onto iff f_n has full column rank
    let injective_maps = d.maps_injective();
    let divisible_connecting_surjective = injective_maps.then(|| {
        let top = d.ranks().len() + 1;
        (1..=top).all(|n| d.map_at(n).is_none_or(|f| rank(ring, &f.transpose()) == f.cols()))
    });
    Ok(Examples24Report {
        split,
        split_implies_ml,
        converse_splitting,
        finite_members_ml,
        injective_maps,
        divisible_connecting_surjective,
        finite_members_ext_zero,
    })
}

#[derive(Clone, Debug)]
pub struct Cor26Report {
    /// `Hom(F_n, ⊕ M_i)` computed directly.
    pub direct: Verdict,
    pub sum: Verdict,
    pub product: Verdict,
    /// All three towers have the same minimal `l`.
    pub indices_agree: bool,
    pub prop12: Prop12Report,
    pub consistent: bool,
}

fn indices<R: EuclideanDomain>(r: &MLReport<R>, upto: usize) -> Vec<Option<usize>> {
    (1..=upto).map(|m| r.l_at(m)).collect()
}

/// ML of `Hom(F_n, ⊕ M_i)` against `Hom(F_n, ∏ M_i)` for a finite family.
pub fn cor26_transfer<R: EuclideanDomain>(d: &DirectSystem<R>, family: &[FPModule<R>], depth: usize) -> Result<Cor26Report> {
    if family.is_empty() {
        return Err(Error::Empty("family of modules"));
    }
    let towers = family.iter().map(|m| hom_tower(d, m)).collect::<Result<Vec<_>>>()?;
    let direct = ml_check(&hom_tower(d, &FPModule::direct_sum(d.ring(), family))?, depth);
    let sum = ml_check(&tower_sum(&towers)?, depth);
    let product = ml_check(&tower_product(&towers)?, depth);
    let upto = d.ranks().len() + depth.max(1) + 1;
    let indices_agree = indices(&direct, upto) == indices(&sum, upto) && indices(&sum, upto) == indices(&product, upto);
    let candidate = match (sum.verdict, sum.tail_shift) {
        (Verdict::Stationary, Some(s)) => IndexSequence { explicit: sum.l.clone(), tail_shift: s },
        _ => IndexSequence::uniform(depth.max(1)),
    };
    let prop12 = prop12_check(&towers, &candidate)?;
    let same = direct.verdict == sum.verdict && sum.verdict == product.verdict;
    let consistent = same && indices_agree && (direct.verdict == Verdict::UndecidedAtDepth || prop12.equivalent);
    Ok(Cor26Report { direct: direct.verdict, sum: sum.verdict, product: product.verdict, indices_agree, prop12, consistent })
}

#[derive(Clone, Debug)]
pub struct Prop29Report {
    pub ambient: Verdict,
    pub submodule: Verdict,
    /// `l_N(m) ≤ l_M(m)` at every compared level.
    pub indices_bounded: bool,
    /// `Hom(F_k, M)f ∩ Hom(F_m, N) = Hom(F_k, N)f` for every checked pair `m < k`.
    pub intersections_equal: bool,
    pub pairs_checked: usize,
    pub ambient_l: Vec<usize>,
    pub submodule_l: Vec<usize>,
}

/// ML passes from `Hom(F_n, M)` to `Hom(F_n, N)` for a pure submodule `N`.
pub fn prop29_transfer<R: EuclideanDomain>(d: &DirectSystem<R>, m: &FPModule<R>, n: &Submodule<R>, depth: usize) -> Result<Prop29Report> {
    if n.ambient() != m {
        return Err(Error::InvalidInput("submodule does not live in the given module".into()));
    }
    let inclusion = n.inclusion();
    if let PurityVerdict::NotPure { r, element } = is_pure_submodule(&inclusion)? {
        let coords: Vec<String> = element.iter().map(|x| x.to_string()).collect();
        return Err(Error::NotPure(format!("({}) lies in {r}M ∩ N but not in {r}N", coords.join(", "))));
    }
    let ambient = ml_check(&hom_tower(d, m)?, depth);
    let sub = ml_check(&hom_tower(d, inclusion.source())?, depth);
    let upto = d.ranks().len() + depth.max(1);
    let ambient_l = indices(&ambient, upto).into_iter().flatten().collect::<Vec<_>>();
    let submodule_l = indices(&sub, upto).into_iter().flatten().collect::<Vec<_>>();
    let indices_bounded = ambient.verdict != Verdict::Stationary
        || (sub.verdict == Verdict::Stationary && submodule_l.iter().zip(&ambient_l).all(|(a, b)| a <= b));

    let ring = d.ring();
    let pairs: Vec<(usize, usize)> =
        (1..=upto).flat_map(|lo| (lo + 1..=lo + depth.max(1)).map(move |hi| (lo, hi))).collect();
    let checks = pairs
        .par_iter()
        .map(|&(lo, hi)| -> Result<bool> {
            let (Some(rl), Some(rh), Some(f)) = (d.rank_at(lo), d.rank_at(hi), d.composite(lo, hi)) else {
                return Ok(true);
            };
            let f = ModuleMap::new(&FPModule::free(ring, rl), &FPModule::free(ring, rh), f)?;
            Ok(pure_intersection_check(&f, m, n)?.is_equal())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prop29Report {
        ambient: ambient.verdict,
        submodule: sub.verdict,
        indices_bounded,
        intersections_equal: checks.iter().all(|b| *b),
        pairs_checked: checks.len(),
        ambient_l,
        submodule_l,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::zmat;
    use super::*;
    use crate::linalg::Integers;
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn tele(c: i64) -> DirectSystem<Integers> {
        DirectSystem::periodic(&Integers, zmat(&[&[c]])).unwrap()
    }

    #[test]
    fn battery_agrees() {
        let r = Integers;
        let rep = cor23_battery(&tele(2), &FPModule::zero(&r), 3, 2).unwrap();
        assert_eq!((rep.surjective, rep.ml, rep.diagonal_factorization), (Condition::Holds, Condition::Holds, Condition::Holds));
        let rep = cor23_battery(&tele(2), &FPModule::cyclic(&r, &z(4)), 3, 2).unwrap();
        assert_eq!((rep.surjective, rep.ml, rep.diagonal_factorization), (Condition::Holds, Condition::Holds, Condition::Holds));
        assert!(rep.consistent);
        let rep = cor23_battery(&tele(2), &FPModule::free(&r, 1), 6, 1).unwrap();
        assert_eq!(rep.ml, Condition::Fails);
        assert_eq!(rep.surjective, Condition::Undecided);
        assert!(rep.certificates.obstruction.is_some());
        assert!(rep.consistent);
    }

    #[test]
    fn ext_against_torsion() {
        let r = Integers;
        assert!(ext1_colim(&tele(2), &FPModule::zero(&r), 2, 2).unwrap().is_zero());
        assert!(ext1_colim(&tele(2), &FPModule::cyclic(&r, &z(2)), 2, 2).unwrap().is_zero());
        for k in 1..=4u32 {
            let orders: Vec<BigInt> = (1..=k).map(|j| z(1 << j)).collect();
            match ext1_colim(&tele(2), &FPModule::from_orders(&r, &orders), 1, 2).unwrap() {
                Ext1Colim::Zero { stabilization_offset, .. } => assert_eq!(stabilization_offset, k as usize),
                Ext1Colim::Undecided { .. } => panic!("finite modules give ML towers"),
            }
        }
        assert!(!ext1_colim(&tele(2), &FPModule::free(&r, 1), 1, 4).unwrap().is_zero());
    }

    #[test]
    fn split_and_divisible_cases() {
        let r = Integers;
        let family = vec![FPModule::cyclic(&r, &z(8)), FPModule::free(&r, 1), FPModule::from_orders(&r, &[z(2), z(0)])];
        let id = DirectSystem::periodic(&r, zmat(&[&[1, 0], &[0, 1]])).unwrap();
        let rep = examples24_suite(&id, &family, 3).unwrap();
        assert_eq!(rep.split, Some(true));
        assert_eq!(rep.split_implies_ml, Some(true));
        assert_eq!(rep.converse_splitting, Some(true));
        let rep = examples24_suite(&tele(2), &family, 3).unwrap();
        assert_eq!(rep.split, Some(false));
        assert!(rep.finite_members_ml);
        assert_eq!(rep.divisible_connecting_surjective, Some(true));
        assert_eq!(rep.finite_members_ext_zero, vec![true]);
        let rep = examples24_suite(&tele(0), &family, 2).unwrap();
        assert!(!rep.injective_maps);
        assert_eq!(rep.divisible_connecting_surjective, None);
    }

    #[test]
    fn sums_and_products() {
        let r = Integers;
        let rep = cor26_transfer(&tele(2), &[FPModule::cyclic(&r, &z(2)), FPModule::cyclic(&r, &z(3))], 2).unwrap();
        assert_eq!(rep.direct, Verdict::Stationary);
        assert!(rep.consistent);
        let family: Vec<_> = (1..=3).map(|k| FPModule::cyclic(&r, &z(1 << k))).collect();
        let rep = cor26_transfer(&tele(2), &family, 2).unwrap();
        assert!(rep.consistent);
        assert_eq!(rep.prop12.minimal_uniform, Some(IndexSequence { explicit: vec![4], tail_shift: 3 }));
        assert!(matches!(cor26_transfer(&tele(2), &[], 2), Err(Error::Empty(_))));
    }

    #[test]
    fn pure_submodules() {
        let r = Integers;
        let m = FPModule::from_orders(&r, &[z(2), z(4)]);
        let n = Submodule::from_elements(&m, &[vec![z(1), z(0)]]).unwrap();
        let rep = prop29_transfer(&tele(2), &m, &n, 3).unwrap();
        assert_eq!((rep.ambient, rep.submodule), (Verdict::Stationary, Verdict::Stationary));
        assert!(rep.indices_bounded && rep.intersections_equal);

        let z2 = FPModule::free(&r, 2);
        let diag = Submodule::from_elements(&z2, &[vec![z(1), z(1)]]).unwrap();
        let id = DirectSystem::periodic(&r, zmat(&[&[1]])).unwrap();
        let rep = prop29_transfer(&id, &z2, &diag, 2).unwrap();
        assert_eq!(rep.ambient_l, rep.submodule_l);

        let zz = FPModule::free(&r, 1);
        let two = Submodule::from_elements(&zz, &[vec![z(2)]]).unwrap();
        assert!(matches!(prop29_transfer(&id, &zz, &two, 2), Err(Error::NotPure(_))));
    }
}
