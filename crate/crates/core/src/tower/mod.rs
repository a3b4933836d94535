//! Towers `H_1 ← H_2 ← H_3 ← ...` of finitely presented modules.
//!
//! A tower is an explicit prefix `H_1..H_d` with maps `λ_n: H_{n+1} → H_n`,
//! followed either by nothing (truncated data) or by a periodic tail
//! `... → H → H → H_d` that repeats one endomorphism forever.

mod delta;
mod ml;
mod ops;

use crate::error::{Error, Result};
use crate::linalg::{mat_mul, EuclideanDomain, Mat};
use crate::module::{FPModule, ModuleMap};

pub use delta::{delta_matrix, delta_window, lim_and_lim1, theorem13_harness, DeltaMatrix, LimReport, LimValue, ObstructionProfile, TargetCertificate, Theorem13Report};
pub use ml::{image_chain, ml_check, ml_wrt, ChainEntry, IndexSequence, MLReport, StrictStep, Verdict, Witness};
pub use ops::{diagonal_map, lemma11_check, prop12_check, tower_product, tower_sum, Lemma11Report, Prop12Report};

#[derive(Clone, Debug)]
pub enum Tail<R: EuclideanDomain> {
    Truncated,
    Periodic {
        module: FPModule<R>,
        map: ModuleMap<R>,
        /// `H → H_d`; absent exactly when the prefix is empty.
        attach: Option<ModuleMap<R>>,
    },
}

#[derive(Clone, Debug)]
pub struct Tower<R: EuclideanDomain> {
    prefix: Vec<FPModule<R>>,
    maps: Vec<ModuleMap<R>>,
    tail: Tail<R>,
}

fn endpoints<R: EuclideanDomain>(f: &ModuleMap<R>, source: &FPModule<R>, target: &FPModule<R>, what: &str) -> Result<()> {
    if f.source() != source || f.target() != target {
        return Err(Error::DimensionMismatch(format!("{what} has the wrong source or target")));
    }
    Ok(())
}

impl<R: EuclideanDomain> Tower<R> {
    pub fn new(prefix: Vec<FPModule<R>>, maps: Vec<ModuleMap<R>>, tail: Tail<R>) -> Result<Self> {
        let d = prefix.len();
        if d == 0 && matches!(tail, Tail::Truncated) {
            return Err(Error::Empty("tower"));
        }
        if maps.len() != d.saturating_sub(1) {
            return Err(Error::DimensionMismatch(format!("{d} prefix modules need {} maps", d.saturating_sub(1))));
        }
        for (n, f) in maps.iter().enumerate() {
            endpoints(f, &prefix[n + 1], &prefix[n], &format!("map {}", n + 1))?;
        }
        if let Tail::Periodic { module, map, attach } = &tail {
            endpoints(map, module, module, "tail map")?;
            match (attach, prefix.last()) {
                (Some(a), Some(last)) => endpoints(a, module, last, "attaching map")?,
                (None, None) => {}
                _ => return Err(Error::InvalidInput("attaching map required exactly when the prefix is nonempty".into())),
            }
        }
        let ring = prefix.first().map(|m| m.ring().clone());
        if let Some(ring) = ring {
            if prefix.iter().any(|m| m.ring() != &ring) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(Tower { prefix, maps, tail })
    }

    /// The periodic tower `... → H → H` with no prefix.
    pub fn periodic(map: &ModuleMap<R>) -> Result<Self> {
        Tower::new(vec![], vec![], Tail::Periodic { module: map.source().clone(), map: map.clone(), attach: None })
    }

    /// `... = H = H` with identity maps.
    pub fn constant(h: &FPModule<R>) -> Self {
        Tower::periodic(&ModuleMap::identity(h)).expect("identity is an endomorphism")
    }

    pub fn truncated(prefix: Vec<FPModule<R>>, maps: Vec<ModuleMap<R>>) -> Result<Self> {
        Tower::new(prefix, maps, Tail::Truncated)
    }

    pub fn prefix(&self) -> &[FPModule<R>] {
        &self.prefix
    }

    pub fn maps(&self) -> &[ModuleMap<R>] {
        &self.maps
    }

    pub fn tail(&self) -> &Tail<R> {
        &self.tail
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Periodic { .. })
    }

    pub fn ring(&self) -> &R {
        match (&self.prefix.first(), &self.tail) {
            (Some(m), _) => m.ring(),
            (None, Tail::Periodic { module, .. }) => module.ring(),
            (None, Tail::Truncated) => unreachable!("constructor rejects empty truncated towers"),
        }
    }

    /// Number of explicit levels, `None` when the tower is infinite.
    pub fn available_depth(&self) -> Option<usize> {
        match self.tail {
            Tail::Truncated => Some(self.prefix.len()),
            Tail::Periodic { .. } => None,
        }
    }

    /// `H_n` for `n ≥ 1`, `None` past the end of a truncated tower.
    pub fn module_at(&self, n: usize) -> Option<&FPModule<R>> {
        assert!(n >= 1, "levels start at 1");
        if n <= self.prefix.len() {
            return Some(&self.prefix[n - 1]);
        }
        match &self.tail {
            Tail::Truncated => None,
            Tail::Periodic { module, .. } => Some(module),
        }
    }

    /// `λ_n: H_{n+1} → H_n`.
    pub fn map_at(&self, n: usize) -> Option<&ModuleMap<R>> {
        assert!(n >= 1, "levels start at 1");
        let d = self.prefix.len();
        if n < d {
            return Some(&self.maps[n - 1]);
        }
        match &self.tail {
            Tail::Truncated => None,
            Tail::Periodic { map, attach, .. } => {
                if n == d {
                    attach.as_ref()
                } else {
                    Some(map)
                }
            }
        }
    }

    /// `λ_m ∘ ... ∘ λ_{k-1}: H_k → H_m` (the identity when `k = m`).
    pub fn composite(&self, m: usize, k: usize) -> Option<ModuleMap<R>> {
        assert!(k >= m, "composite runs downwards");
        let hm = self.module_at(m)?;
        let ring = hm.ring();
        let mut mat = Mat::identity(ring, hm.gens());
        for n in m..k {
            let f = self.map_at(n)?;
            mat = hm.reduce_columns(&mat_mul(ring, &mat, f.matrix()).expect("consecutive maps compose"));
        }
        let hk = self.module_at(k)?;
        Some(ModuleMap::new_unchecked(hk, hm, mat))
    }

    /// The same tower with at least `depth` explicit levels.
    pub fn unroll_to(&self, depth: usize) -> Tower<R> {
        let Tail::Periodic { module, map, attach } = &self.tail else {
            return self.clone();
        };
        let mut prefix = self.prefix.clone();
        let mut maps = self.maps.clone();
        let mut link = attach.clone();
        while prefix.len() < depth {
            if let Some(a) = link.take() {
                maps.push(a);
            }
            prefix.push(module.clone());
            link = Some(map.clone());
        }
        Tower { prefix, maps, tail: Tail::Periodic { module: module.clone(), map: map.clone(), attach: link } }
    }

    /// Generator count over levels `1..=depth`.
    pub fn total_gens(&self, depth: usize) -> usize {
        (1..=depth).filter_map(|n| self.module_at(n)).map(|m| m.gens()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Integers;
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn times(h: &FPModule<Integers>, c: i64) -> ModuleMap<Integers> {
        ModuleMap::new(h, h, Mat::from_fn(1, 1, |_, _| z(c))).unwrap()
    }

    #[test]
    fn levels_and_composites() {
        let r = Integers;
        let zz = FPModule::free(&r, 1);
        let t = Tower::periodic(&times(&zz, 2)).unwrap();
        assert_eq!(t.composite(1, 4).unwrap().matrix().at(0, 0), &z(8));
        let u = t.unroll_to(3);
        assert_eq!(u.prefix_len(), 3);
        assert_eq!(u.composite(1, 5).unwrap().matrix().at(0, 0), &z(16));
    }

    #[test]
    fn constructor_checks() {
        let r = Integers;
        let zz = FPModule::free(&r, 1);
        let z2 = FPModule::cyclic(&r, &z(2));
        assert!(Tower::<Integers>::truncated(vec![], vec![]).is_err());
        assert!(Tower::truncated(vec![zz.clone(), z2.clone()], vec![]).is_err());
        let f = ModuleMap::new(&z2, &zz, Mat::from_fn(1, 1, |_, _| z(0))).unwrap();
        assert!(Tower::truncated(vec![zz.clone(), z2.clone()], vec![f.clone()]).is_ok());
        assert!(Tower::truncated(vec![z2.clone(), zz.clone()], vec![f]).is_err());
        let tail = Tail::Periodic { module: zz.clone(), map: times(&zz, 1), attach: None };
        assert!(Tower::new(vec![zz.clone()], vec![], tail).is_err());
    }
}
