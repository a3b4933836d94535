use crate::error::{Error, Result};
use crate::linalg::{EuclideanDomain, Mat};

use super::{FPModule, Submodule};

/// Torsion submodule and a nonzero annihilator of it (`1` when it is zero).
pub fn torsion_submodule<R: EuclideanDomain>(g: &FPModule<R>) -> (Submodule<R>, R::Elem) {
    let ring = g.ring();
    let torsion: Vec<_> = g.components().into_iter().filter(|c| !ring.is_zero(&c.order)).collect();
    let gens: Vec<Vec<R::Elem>> = torsion.iter().map(|c| g.component_generator(c.index)).collect();
    // invariant factors form a divisibility chain, so the last one is the lcm
    let ann = torsion.last().map_or_else(|| ring.one(), |c| c.order.clone());
    (Submodule::new_unchecked(g, Mat::from_columns(g.gens(), &gens)), ann)
}

#[derive(Clone, Debug)]
pub struct DivisiblePart<R: EuclideanDomain> {
    /// `∩ rG` over every nonzero `r`.
    pub structural: Submodule<R>,
    /// `∩ rG` over the probe set only.
    pub sampled: Submodule<R>,
}

fn check_probes<R: EuclideanDomain>(ring: &R, probes: &[R::Elem]) -> Result<()> {
    if probes.is_empty() {
        return Err(Error::Empty("probe set"));
    }
    if probes.iter().any(|r| ring.is_zero(r)) {
        return Err(Error::InvalidInput("probe elements must be nonzero".into()));
    }
    Ok(())
}

fn sampled_intersection<R: EuclideanDomain>(g: &FPModule<R>, probes: &[R::Elem]) -> Result<Submodule<R>> {
    let whole = Submodule::whole(g);
    let mut acc = whole.scaled(&probes[0]).compact();
    for r in &probes[1..] {
        acc = acc.intersect(&whole.scaled(r))?;
    }
    Ok(acc)
}

/// Divisible part of a finitely generated module, structurally and over a probe set.
pub fn divisible_part<R: EuclideanDomain>(g: &FPModule<R>, probes: &[R::Elem]) -> Result<DivisiblePart<R>> {
    let ring = g.ring();
    check_probes(ring, probes)?;
    if ring.is_field() {
        return Err(Error::FieldInstance);
    }
    // G ≅ R^f ⊕ T with a·T = 0 for a = ann(T). For a non-unit p the
    // elements r = a·p^k give rG = a·p^k·R^f, and ∩_k p^k R = 0, so the
    // intersection over all nonzero r is 0.
    let structural = Submodule::zero(g);
    let sampled = sampled_intersection(g, probes)?;
    debug_assert!(structural.is_subset(&sampled));
    Ok(DivisiblePart { structural, sampled })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MuVerdict<E> {
    Injective,
    /// A nonzero element of the kernel of `G → ∏ G/rG`.
    Kernel(Vec<E>),
}

/// Injectivity of `G → ∏_{r ∈ S} G/rG`.
pub fn finite_mu_check<R: EuclideanDomain>(probes: &[R::Elem], g: &FPModule<R>) -> Result<MuVerdict<R::Elem>> {
    check_probes(g.ring(), probes)?;
    let kernel = sampled_intersection(g, probes)?;
    Ok(match kernel.generators().columns().into_iter().find(|c| !g.is_zero_elem(c)) {
        Some(x) => MuVerdict::Kernel(g.reduce(&x)),
        None => MuVerdict::Injective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{GfPoly, Integers};
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn torsion_examples() {
        let r = Integers;
        let g = FPModule::from_orders(&r, &[z(6), z(0)]);
        let (t, ann) = torsion_submodule(&g);
        assert_eq!(ann, z(6));
        assert!(t.to_module().is_isomorphic(&FPModule::cyclic(&r, &z(6))));
        let (t, ann) = torsion_submodule(&FPModule::free(&r, 3));
        assert!(t.is_zero());
        assert_eq!(ann, z(1));
        let g = FPModule::from_orders(&r, &[z(2), z(4)]);
        let (t, ann) = torsion_submodule(&g);
        assert_eq!(ann, z(4));
        assert!(t.is_whole());
    }

    #[test]
    fn divisible_examples() {
        let r = Integers;
        let zz = FPModule::free(&r, 1);
        let d = divisible_part(&zz, &[z(2), z(3)]).unwrap();
        assert!(d.structural.is_zero());
        assert!(d.sampled.equals(&Submodule::from_elements(&zz, &[vec![z(6)]]).unwrap()));
        let z6 = FPModule::cyclic(&r, &z(6));
        assert!(divisible_part(&z6, &[z(6)]).unwrap().sampled.is_zero());
        assert!(divisible_part(&FPModule::zero(&r), &[z(5)]).unwrap().sampled.is_zero());
        assert_eq!(divisible_part(&zz, &[]).unwrap_err(), Error::Empty("probe set"));
    }

    #[test]
    fn mu_examples() {
        let r = Integers;
        assert_eq!(finite_mu_check(&[z(6)], &FPModule::cyclic(&r, &z(6))).unwrap(), MuVerdict::Injective);
        match finite_mu_check(&[z(2), z(3)], &FPModule::free(&r, 1)).unwrap() {
            MuVerdict::Kernel(x) => assert_eq!(&x[0] % 6, z(0)),
            v => panic!("{v:?}"),
        }
        assert_eq!(finite_mu_check(&[z(2)], &FPModule::zero(&r)).unwrap(), MuVerdict::Injective);
    }

    #[test]
    fn polynomial_ring_is_not_a_field() {
        let r = GfPoly::new(2).unwrap();
        let g = FPModule::free(&r, 1);
        let d = divisible_part(&g, &[r.poly(&[0, 1])]).unwrap();
        assert!(!d.sampled.is_zero());
    }
}
