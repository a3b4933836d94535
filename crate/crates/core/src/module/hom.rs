//! `Hom(M, N)` as an FP module, computed in Smith coordinates of both
//! modules, with an encoder/decoder between its elements and actual maps.

use crate::error::{Error, Result};
use crate::linalg::{mat_mul, snf, EuclideanDomain, Mat};

use super::{FPModule, ModuleMap};

/// Caps on intermediate object sizes. Exceeding one is an error, never a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_hom_generators: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_hom_generators: 4096 }
    }
}

#[derive(Clone, Debug)]
struct HomPair<E> {
    source_comp: usize,
    target_comp: usize,
    /// The generator sends source summand `source_comp` to `scale` times target summand `target_comp`.
    scale: E,
    order: E,
}

#[derive(Clone, Debug)]
pub struct HomModule<R: EuclideanDomain> {
    module: FPModule<R>,
    source: FPModule<R>,
    target: FPModule<R>,
    pairs: Vec<HomPair<R::Elem>>,
}

pub fn hom_module<R: EuclideanDomain>(m: &FPModule<R>, n: &FPModule<R>) -> Result<HomModule<R>> {
    hom_module_with(m, n, &Limits::default())
}

pub fn hom_module_with<R: EuclideanDomain>(m: &FPModule<R>, n: &FPModule<R>, limits: &Limits) -> Result<HomModule<R>> {
    m.same_ring(n)?;
    let ring = m.ring();
    let mut pairs = Vec::new();
    for tc in n.components() {
        for sc in m.components() {
            let (scale, order) = if ring.is_zero(&sc.order) {
                (ring.one(), tc.order.clone())
            } else if ring.is_zero(&tc.order) {
                continue;
            } else {
                let g = ring.gcd(&sc.order, &tc.order);
                (ring.div_exact(&tc.order, &g).expect("gcd divides"), g)
            };
            if ring.is_unit(&order) {
                continue;
            }
            pairs.push(HomPair { source_comp: sc.index, target_comp: tc.index, scale, order });
            if pairs.len() > limits.max_hom_generators {
                return Err(Error::ResourceCap(format!(
                    "Hom module needs more than {} generators",
                    limits.max_hom_generators
                )));
            }
        }
    }
    let orders: Vec<R::Elem> = pairs.iter().map(|p| p.order.clone()).collect();
    Ok(HomModule { module: FPModule::from_orders(ring, &orders), source: m.clone(), target: n.clone(), pairs })
}

impl<R: EuclideanDomain> HomModule<R> {
    pub fn module(&self) -> &FPModule<R> {
        &self.module
    }

    pub fn source(&self) -> &FPModule<R> {
        &self.source
    }

    pub fn target(&self) -> &FPModule<R> {
        &self.target
    }

    pub fn decode(&self, h: &[R::Elem]) -> Result<ModuleMap<R>> {
        self.module.check_element(h)?;
        let ring = self.module.ring();
        let mut y = Mat::zeros(ring, self.target.gens(), self.source.gens());
        for (p, c) in self.pairs.iter().zip(h) {
            let v = ring.mul(&ring.rem(c, &p.order), &p.scale);
            y.set(p.target_comp, p.source_comp, v);
        }
        let x = mat_mul(ring, &mat_mul(ring, self.target.smith_inverse(), &y)?, self.source.smith_transform())?;
        Ok(ModuleMap::new_unchecked(&self.source, &self.target, self.target.reduce_columns(&x)))
    }

    pub fn encode(&self, f: &ModuleMap<R>) -> Result<Vec<R::Elem>> {
        if f.source() != &self.source || f.target() != &self.target {
            return Err(Error::DimensionMismatch("map does not belong to this Hom module".into()));
        }
        let ring = self.module.ring();
        let y = mat_mul(ring, &mat_mul(ring, self.target.smith_transform(), f.matrix())?, self.source.smith_inverse())?;
        let orders = self.target_orders();
        self.pairs
            .iter()
            .map(|p| {
                let r = ring.rem(y.at(p.target_comp, p.source_comp), &orders[p.target_comp]);
                let q = ring
                    .div_exact(&r, &p.scale)
                    .ok_or_else(|| Error::NotWellDefined("map does not respect relations".into()))?;
                Ok(ring.rem(&q, &p.order))
            })
            .collect()
    }

    fn target_orders(&self) -> Vec<R::Elem> {
        let ring = self.module.ring();
        let mut v = vec![ring.one(); self.target.gens()];
        for c in self.target.components() {
            v[c.index] = c.order;
        }
        v
    }

    /// Decoded generators of the Hom module.
    pub fn generator_maps(&self) -> Vec<ModuleMap<R>> {
        (0..self.module.gens())
            .map(|i| self.decode(&self.module.unit_vector(i)).expect("unit vector has the right length"))
            .collect()
    }
}

/// The precomposition map `Hom(C', M) → Hom(C, M)` with its Hom modules.
#[derive(Clone, Debug)]
pub struct HomInduced<R: EuclideanDomain> {
    pub source: HomModule<R>,
    pub target: HomModule<R>,
    pub map: ModuleMap<R>,
}

fn induced<R: EuclideanDomain>(
    from: HomModule<R>,
    to: HomModule<R>,
    act: impl Fn(&ModuleMap<R>) -> Result<ModuleMap<R>>,
) -> Result<HomInduced<R>> {
    let cols = from
        .generator_maps()
        .iter()
        .map(|g| to.encode(&act(g)?))
        .collect::<Result<Vec<_>>>()?;
    let mat = Mat::from_columns(to.module.gens(), &cols);
    let map = ModuleMap::new_unchecked(&from.module, &to.module, mat);
    debug_assert!(ModuleMap::new(map.source(), map.target(), map.matrix().clone()).is_ok());
    Ok(HomInduced { source: from, target: to, map })
}

/// `Hom(f, M)`: precomposition with `f: C → C'`.
pub fn apply_hom_contra<R: EuclideanDomain>(f: &ModuleMap<R>, m: &FPModule<R>) -> Result<HomInduced<R>> {
    apply_hom_contra_with(f, m, &Limits::default())
}

pub fn apply_hom_contra_with<R: EuclideanDomain>(
    f: &ModuleMap<R>,
    m: &FPModule<R>,
    limits: &Limits,
) -> Result<HomInduced<R>> {
    f.source().same_ring(m)?;
    let from = hom_module_with(f.target(), m, limits)?;
    let to = hom_module_with(f.source(), m, limits)?;
    induced(from, to, |g| g.compose_after(f))
}

/// `Hom(C, g)`: postcomposition with `g: M → M'`.
pub fn apply_hom_cov<R: EuclideanDomain>(g: &ModuleMap<R>, c: &FPModule<R>) -> Result<HomInduced<R>> {
    g.source().same_ring(c)?;
    let limits = Limits::default();
    let from = hom_module_with(c, g.source(), &limits)?;
    let to = hom_module_with(c, g.target(), &limits)?;
    induced(from, to, |h| g.compose_after(h))
}

/// `Ext¹(M, N)` from the presentation stored in `M`.
pub fn ext1<R: EuclideanDomain>(m: &FPModule<R>, n: &FPModule<R>) -> Result<FPModule<R>> {
    ext1_of_presentation(m.relations(), n, &Limits::default())
}

/// `Ext¹(coker A, N)` as the cokernel of `Hom(F, N) → Hom(K, N)` for the
/// free resolution `0 → K → F → coker A → 0`.
pub fn ext1_of_presentation<R: EuclideanDomain>(
    relations: &Mat<R::Elem>,
    n: &FPModule<R>,
    limits: &Limits,
) -> Result<FPModule<R>> {
    let ring = n.ring();
    let s = snf(ring, relations);
    // a basis of the relation lattice: d_i times the Smith basis vectors
    let basis: Vec<Vec<R::Elem>> = (0..s.rank())
        .map(|i| s.u_inv.column(i).iter().map(|x| ring.mul(x, &s.factors[i])).collect())
        .collect();
    let f = FPModule::free(ring, relations.rows());
    let k = FPModule::free(ring, basis.len());
    let iota = ModuleMap::new_unchecked(&k, &f, Mat::from_columns(relations.rows(), &basis));
    let induced = apply_hom_contra_with(&iota, n, limits)?;
    Ok(induced.map.cokernel().0)
}
