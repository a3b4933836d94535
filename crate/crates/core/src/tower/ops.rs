//! Diagonal maps, sums and products of finite families of towers.

use crate::error::{Error, Result};
use crate::linalg::{EuclideanDomain, Mat};
use crate::module::{FPModule, ModuleMap};

use super::ml::{ml_check, ml_wrt, IndexSequence, Verdict};
use super::{Tail, Tower};

/// The block diagonal map `⊕ M_i → ⊕ N_i` induced by a finite family.
pub fn diagonal_map<R: EuclideanDomain>(family: &[ModuleMap<R>]) -> Result<ModuleMap<R>> {
    let first = family.first().ok_or(Error::Empty("family of maps"))?;
    let ring = first.ring();
    let sources: Vec<FPModule<R>> = family.iter().map(|f| f.source().clone()).collect();
    let targets: Vec<FPModule<R>> = family.iter().map(|f| f.target().clone()).collect();
    for f in family {
        f.source().same_ring(first.source())?;
    }
    let blocks: Vec<Mat<R::Elem>> = family.iter().map(|f| f.matrix().clone()).collect();
    let source = FPModule::direct_sum(ring, &sources);
    let target = FPModule::direct_sum(ring, &targets);
    Ok(ModuleMap::new_unchecked(&source, &target, Mat::block_diagonal(ring, &blocks)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma11Report {
    /// Diagonal of the composites equals the composite of the diagonals.
    pub composition_law: bool,
    /// `ΓΛ(∏ K_i) = Γ(∏ M_i)`.
    pub product_images_equal: bool,
    /// `γ_i λ_i(K_i) = γ_i(M_i)` for every `i`.
    pub componentwise_images_equal: bool,
    /// `Γ'Λ'(⊕ K_i) = Γ'(⊕ M_i)`.
    pub sum_images_equal: bool,
}

fn outer_image_equal<R: EuclideanDomain>(gamma: &ModuleMap<R>, lambda: &ModuleMap<R>) -> Result<bool> {
    let composite = gamma.compose_after(lambda)?;
    Ok(gamma.image().is_subset(&composite.image()))
}

/// Checks the composition law and the three image equalities for families
/// `λ_i: K_i → M_i`, `γ_i: M_i → N_i`.
pub fn lemma11_check<R: EuclideanDomain>(lambdas: &[ModuleMap<R>], gammas: &[ModuleMap<R>]) -> Result<Lemma11Report> {
    if lambdas.len() != gammas.len() {
        return Err(Error::DimensionMismatch("families have different sizes".into()));
    }
    let composites = gammas
        .iter()
        .zip(lambdas)
        .map(|(g, l)| g.compose_after(l))
        .collect::<Result<Vec<_>>>()?;
    let big_lambda = diagonal_map(lambdas)?;
    let big_gamma = diagonal_map(gammas)?;
    let composed = big_gamma.compose_after(&big_lambda)?;
    let composition_law = composed.equals(&diagonal_map(&composites)?);
    // finite products and sums are the same module; both are built from the
    // same family through separate calls so neither reuses the other
    let product_images_equal = outer_image_equal(&big_gamma, &big_lambda)?;
    let sum_images_equal = outer_image_equal(&diagonal_map(gammas)?, &diagonal_map(lambdas)?)?;
    let componentwise_images_equal = gammas
        .iter()
        .zip(lambdas)
        .map(|(g, l)| outer_image_equal(g, l))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    Ok(Lemma11Report { composition_law, product_images_equal, componentwise_images_equal, sum_images_equal })
}

fn combine<R: EuclideanDomain>(family: &[Tower<R>]) -> Result<Tower<R>> {
    let first = family.first().ok_or(Error::Empty("family of towers"))?;
    let ring = first.ring().clone();
    let all_periodic = family.iter().all(|t| t.is_periodic());
    if !all_periodic {
        if family.iter().any(|t| t.is_periodic()) {
            return Err(Error::IncompatibleTails("periodic and truncated towers mixed".into()));
        }
        if family.iter().any(|t| t.prefix_len() != first.prefix_len()) {
            return Err(Error::IncompatibleTails("truncated towers of different lengths".into()));
        }
    }
    let d = family.iter().map(|t| t.prefix_len()).max().unwrap_or(0);
    let family: Vec<Tower<R>> = family.iter().map(|t| t.unroll_to(d)).collect();
    let prefix: Vec<FPModule<R>> = (1..=d)
        .map(|n| {
            let parts: Vec<FPModule<R>> = family.iter().map(|t| t.prefix()[n - 1].clone()).collect();
            FPModule::direct_sum(&ring, &parts)
        })
        .collect();
    let maps = (0..d.saturating_sub(1))
        .map(|n| diagonal_map(&family.iter().map(|t| t.maps()[n].clone()).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let tail = if all_periodic {
        let mut tails = Vec::new();
        let mut attaches = Vec::new();
        for t in &family {
            let Tail::Periodic { map, attach, .. } = t.tail() else { unreachable!() };
            tails.push(map.clone());
            attaches.extend(attach.clone());
        }
        let map = diagonal_map(&tails)?;
        let attach = if d == 0 { None } else { Some(diagonal_map(&attaches)?) };
        Tail::Periodic { module: map.source().clone(), map, attach }
    } else {
        Tail::Truncated
    };
    Tower::new(prefix, maps, tail)
}

/// Levelwise direct sum with diagonal connecting maps.
pub fn tower_sum<R: EuclideanDomain>(family: &[Tower<R>]) -> Result<Tower<R>> {
    combine(family)
}

/// Levelwise product; for a finite family it has the same levels as the sum.
pub fn tower_product<R: EuclideanDomain>(family: &[Tower<R>]) -> Result<Tower<R>> {
    combine(family)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop12Report {
    pub product_ml: Option<bool>,
    pub factors_ml: Vec<Option<bool>>,
    pub sum_ml: Option<bool>,
    /// Indices of factors that are not ML with respect to the candidate.
    pub violating: Vec<usize>,
    /// The pointwise minimal valid sequence for the whole family, if one exists.
    pub minimal_uniform: Option<IndexSequence>,
    /// All three statements were decided and agree.
    pub equivalent: bool,
}

/// Product ML ⇔ every factor ML ⇔ sum ML, with respect to `l`.
pub fn prop12_check<R: EuclideanDomain>(family: &[Tower<R>], l: &IndexSequence) -> Result<Prop12Report> {
    let product = tower_product(family)?;
    let sum = tower_sum(family)?;
    let factors_ml = family.iter().map(|t| ml_wrt(t, l)).collect::<Result<Vec<_>>>()?;
    let product_ml = ml_wrt(&product, l)?;
    let sum_ml = ml_wrt(&sum, l)?;
    let violating = factors_ml
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == Some(false))
        .map(|(i, _)| i)
        .collect();
    let all_factors = factors_ml.iter().copied().collect::<Option<Vec<bool>>>().map(|v| v.iter().all(|b| *b));
    let equivalent = matches!((product_ml, all_factors, sum_ml), (Some(a), Some(b), Some(c)) if a == b && b == c);
    let rep = ml_check(&sum, 0);
    let minimal_uniform = (rep.verdict == Verdict::Stationary).then(|| IndexSequence {
        explicit: rep.l.clone(),
        tail_shift: rep.tail_shift.expect("stationary"),
    });
    Ok(Prop12Report { product_ml, factors_ml, sum_ml, violating, minimal_uniform, equivalent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Integers;
    use crate::module::Submodule;
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn times(h: &FPModule<Integers>, c: i64) -> ModuleMap<Integers> {
        ModuleMap::new(h, h, Mat::from_fn(1, 1, |_, _| z(c))).unwrap()
    }

    fn two_power(k: u32) -> Tower<Integers> {
        let h = FPModule::cyclic(&Integers, &z(1 << k));
        Tower::periodic(&times(&h, 2)).unwrap()
    }

    #[test]
    fn diagonal_of_identities_and_block_images() {
        let r = Integers;
        let z4 = FPModule::cyclic(&r, &z(4));
        let id = diagonal_map(&[ModuleMap::identity(&z4), ModuleMap::identity(&z4)]).unwrap();
        assert!(id.equals(&ModuleMap::identity(id.source())));
        let d = diagonal_map(&[times(&z4, 2), times(&z4, 0)]).unwrap();
        let want = Submodule::from_elements(d.target(), &[vec![z(2), z(0)]]).unwrap();
        assert!(d.image().equals(&want));
        assert!(d.image().to_module().is_isomorphic(&FPModule::cyclic(&r, &z(2))));
        assert_eq!(diagonal_map::<Integers>(&[]).unwrap_err(), Error::Empty("family of maps"));
    }

    #[test]
    fn lemma11_on_small_family() {
        let r = Integers;
        let z4 = FPModule::cyclic(&r, &z(4));
        let rep = lemma11_check(&[times(&z4, 1), times(&z4, 2)], &[times(&z4, 2), times(&z4, 1)]).unwrap();
        assert!(rep.composition_law);
        assert!(!rep.componentwise_images_equal);
        assert_eq!(rep.product_images_equal, rep.componentwise_images_equal);
        assert_eq!(rep.sum_images_equal, rep.componentwise_images_equal);
        let rep = lemma11_check(&[times(&z4, 3)], &[times(&z4, 2)]).unwrap();
        assert!(rep.product_images_equal && rep.componentwise_images_equal && rep.sum_images_equal);
    }

    #[test]
    fn sum_of_two_power_towers() {
        let family: Vec<_> = (1..=3).map(two_power).collect();
        let sum = tower_sum(&family).unwrap();
        let rep = ml_check(&sum, 0);
        assert_eq!(rep.tail_shift, Some(3));
        let p = prop12_check(&family, &IndexSequence::uniform(2)).unwrap();
        assert_eq!(p.violating, vec![2]);
        assert_eq!(p.sum_ml, Some(false));
        assert!(p.equivalent);
        let p = prop12_check(&family, &IndexSequence::uniform(3)).unwrap();
        assert_eq!(p.sum_ml, Some(true));
        assert_eq!(p.minimal_uniform, Some(IndexSequence { explicit: vec![4], tail_shift: 3 }));
    }

    #[test]
    fn not_ml_factor_poisons_the_sum() {
        let r = Integers;
        let zz = FPModule::free(&r, 1);
        let family = vec![two_power(2), Tower::periodic(&times(&zz, 2)).unwrap()];
        let p = prop12_check(&family, &IndexSequence::uniform(5)).unwrap();
        assert_eq!(p.sum_ml, Some(false));
        assert!(p.minimal_uniform.is_none());
        assert!(p.equivalent);
    }

    #[test]
    fn mixed_tails_are_rejected() {
        let r = Integers;
        let z2 = FPModule::cyclic(&r, &z(2));
        let trunc = Tower::truncated(vec![z2.clone()], vec![]).unwrap();
        assert!(matches!(tower_sum(&[trunc, two_power(1)]), Err(Error::IncompatibleTails(_))));
    }

    #[test]
    fn prefixes_of_different_lengths() {
        let r = Integers;
        let z4 = FPModule::cyclic(&r, &z(4));
        let t1 = Tower::new(
            vec![z4.clone(), z4.clone()],
            vec![times(&z4, 0)],
            Tail::Periodic { module: z4.clone(), map: times(&z4, 1), attach: Some(times(&z4, 1)) },
        )
        .unwrap();
        let sum = tower_sum(&[t1.clone(), two_power(1)]).unwrap();
        assert_eq!(sum.prefix_len(), 2);
        let rep = ml_check(&sum, 0);
        assert_eq!(rep.l_at(1), Some(2));
        assert_eq!(rep.l_at(2), Some(3));
    }
}
