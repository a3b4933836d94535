use crate::error::{Error, Result};
use crate::linalg::EuclideanDomain;

use super::hom::{apply_hom_cov, hom_module};
use super::map::factor_left;
use super::{apply_hom_contra, FPModule, ModuleMap, Submodule};

#[derive(Clone, Debug)]
pub enum PurityVerdict<R: EuclideanDomain> {
    /// `retraction ∘ inclusion = id`.
    Pure { retraction: ModuleMap<R> },
    /// `element ∈ (rM ∩ N) \ rN`, in coordinates of `M`.
    NotPure { r: R::Elem, element: Vec<R::Elem> },
}

impl<R: EuclideanDomain> PurityVerdict<R> {
    pub fn is_pure(&self) -> bool {
        matches!(self, PurityVerdict::Pure { .. })
    }
}

/// Purity of a finitely generated submodule, decided by splitting.
pub fn is_pure_submodule<R: EuclideanDomain>(inclusion: &ModuleMap<R>) -> Result<PurityVerdict<R>> {
    if !inclusion.is_injective() {
        return Err(Error::NotInjective);
    }
    let n = inclusion.source();
    if let Some(retraction) = factor_left(inclusion, &ModuleMap::identity(n))? {
        return Ok(PurityVerdict::Pure { retraction });
    }
    let ring = n.ring();
    let m = inclusion.target();
    let (q, _) = inclusion.cokernel();
    // a non-summand has a torsion quotient; if m ∈ M has rm ∈ N \ rN, the
    // order s of m in M/N divides r and already gives sm ∈ N \ sN
    let top = q
        .normal_form()
        .factors
        .last()
        .cloned()
        .ok_or_else(|| Error::InvalidInput("no retraction but the quotient is torsion-free".into()))?;
    let image = inclusion.image();
    let whole = Submodule::whole(m);
    for r in ring.divisors(&top)? {
        if ring.is_unit(&r) {
            continue;
        }
        let meet = whole.scaled(&r).intersect(&image)?;
        let r_n = image.scaled(&r);
        if let Some(x) = meet.subset_witness(&r_n) {
            return Ok(PurityVerdict::NotPure { r, element: m.reduce(&x) });
        }
    }
    Err(Error::InvalidInput("no retraction and no purity witness among divisors".into()))
}

#[derive(Clone, Debug)]
pub enum IntersectionVerdict<R: EuclideanDomain> {
    Equal,
    /// `composite = k ∘ f` lies in `Hom(C', M)f ∩ Hom(C, N)` but not in `Hom(C', N)f`.
    Unequal { k: ModuleMap<R>, composite: ModuleMap<R> },
}

impl<R: EuclideanDomain> IntersectionVerdict<R> {
    pub fn is_equal(&self) -> bool {
        matches!(self, IntersectionVerdict::Equal)
    }
}

/// Decides `Hom(C', M)f ∩ Hom(C, N) = Hom(C', N)f` inside `Hom(C, M)`.
pub fn pure_intersection_check<R: EuclideanDomain>(
    f: &ModuleMap<R>,
    m: &FPModule<R>,
    n: &Submodule<R>,
) -> Result<IntersectionVerdict<R>> {
    if n.ambient() != m {
        return Err(Error::InvalidInput("N is not a submodule of M".into()));
    }
    f.source().same_ring(m)?;
    let (c, c2) = (f.source(), f.target());
    let eps = n.inclusion();
    let n_mod = eps.source().clone();

    let pre = apply_hom_contra(f, m)?;
    let h_cm = &pre.target;
    let lhs_a = pre.map.image();
    let into_n = apply_hom_cov(&eps, c)?;
    let lhs_b = into_n.map.image();
    let lhs = lhs_a.intersect(&lhs_b)?;

    let h_c2n = hom_module(c2, &n_mod)?;
    let rhs_gens = h_c2n
        .generator_maps()
        .iter()
        .map(|p| h_cm.encode(&eps.compose_after(p)?.compose_after(f)?))
        .collect::<Result<Vec<_>>>()?;
    let rhs = Submodule::from_elements(h_cm.module(), &rhs_gens)?;

    let Some(x) = lhs.subset_witness(&rhs) else {
        return Ok(IntersectionVerdict::Equal);
    };
    // the image is spanned by the images of the generators, so the
    // coefficients are already an element of Hom(C', M)
    let coeffs = lhs_a.express(&x)?.expect("intersection lies in the first image");
    let k = pre.source.decode(&coeffs)?;
    let composite = k.compose_after(f)?;
    debug_assert!(composite.equals(&h_cm.decode(&x)?));
    Ok(IntersectionVerdict::Unequal { k, composite })
}
