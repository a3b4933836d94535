//! Countable direct systems `F_1 → F_2 → ...` of finitely generated free
//! modules, the map `φ` and the towers `Hom(F_n, M)`.

mod battery;
mod jensen;
mod projective;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, kronecker, EuclideanDomain, Mat};
use crate::module::{FPModule, ModuleMap};
use crate::tower::{Tail, Tower};

pub use battery::{
    cor23_battery, cor26_transfer, examples24_suite, ext1_colim, prop29_transfer, Condition, Cor23Report, Cor26Report,
    Examples24Report, Ext1Colim, Prop29Report,
};
pub use jensen::{jensen_system, FlatnessMode, JensenOutcome, Presentation, Stage};
pub use projective::{projectivity_test, splitting, Projectivity, Splitting};

#[derive(Clone, Debug)]
pub enum SystemTail<E> {
    Truncated,
    /// `F_d → F → F → ...` repeating `map`; `attach` is absent exactly when there is no prefix.
    Periodic { rank: usize, map: Mat<E>, attach: Option<Mat<E>> },
}

#[derive(Clone, Debug)]
pub struct DirectSystem<R: EuclideanDomain> {
    ring: R,
    ranks: Vec<usize>,
    /// `f_n` is `r_{n+1} × r_n`.
    maps: Vec<Mat<R::Elem>>,
    tail: SystemTail<R::Elem>,
}

fn shape<E: Clone>(m: &Mat<E>, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::DimensionMismatch(format!(
            "{what} is {}×{}, expected {rows}×{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl<R: EuclideanDomain> DirectSystem<R> {
    pub fn new(ring: &R, ranks: Vec<usize>, maps: Vec<Mat<R::Elem>>, tail: SystemTail<R::Elem>) -> Result<Self> {
        let d = ranks.len();
        if d == 0 && matches!(tail, SystemTail::Truncated) {
            return Err(Error::Empty("direct system"));
        }
        if maps.len() != d.saturating_sub(1) {
            return Err(Error::DimensionMismatch(format!("{d} levels need {} maps", d.saturating_sub(1))));
        }
        for (n, f) in maps.iter().enumerate() {
            shape(f, ranks[n + 1], ranks[n], &format!("f_{}", n + 1))?;
        }
        if let SystemTail::Periodic { rank, map, attach } = &tail {
            shape(map, *rank, *rank, "tail map")?;
            match (attach, ranks.last()) {
                (Some(a), Some(&rd)) => shape(a, *rank, rd, "attaching map")?,
                (None, None) => {}
                _ => return Err(Error::InvalidInput("attaching map required exactly when there are explicit levels".into())),
            }
        }
        Ok(DirectSystem { ring: ring.clone(), ranks, maps, tail })
    }

    /// `F → F → ...` with one repeated endomorphism.
    pub fn periodic(ring: &R, map: Mat<R::Elem>) -> Result<Self> {
        let rank = map.rows();
        DirectSystem::new(ring, vec![], vec![], SystemTail::Periodic { rank, map, attach: None })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn maps(&self) -> &[Mat<R::Elem>] {
        &self.maps
    }

    pub fn tail(&self) -> &SystemTail<R::Elem> {
        &self.tail
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, SystemTail::Periodic { .. })
    }

    /// Number of levels, `None` when infinite.
    pub fn available_depth(&self) -> Option<usize> {
        match self.tail {
            SystemTail::Truncated => Some(self.ranks.len()),
            SystemTail::Periodic { .. } => None,
        }
    }

    /// `r_n`, 1-based.
    pub fn rank_at(&self, n: usize) -> Option<usize> {
        assert!(n >= 1, "levels start at 1");
        if n <= self.ranks.len() {
            return Some(self.ranks[n - 1]);
        }
        match &self.tail {
            SystemTail::Truncated => None,
            SystemTail::Periodic { rank, .. } => Some(*rank),
        }
    }

    /// `f_n: F_n → F_{n+1}`.
    pub fn map_at(&self, n: usize) -> Option<&Mat<R::Elem>> {
        assert!(n >= 1, "levels start at 1");
        let d = self.ranks.len();
        if n < d {
            return Some(&self.maps[n - 1]);
        }
        match &self.tail {
            SystemTail::Truncated => None,
            SystemTail::Periodic { map, attach, .. } => {
                if n == d {
                    attach.as_ref()
                } else {
                    Some(map)
                }
            }
        }
    }

    /// `f_{k-1} ⋯ f_m: F_m → F_k` (the identity when `k = m`).
    pub fn composite(&self, m: usize, k: usize) -> Option<Mat<R::Elem>> {
        assert!(k >= m, "composite runs upwards");
        let mut acc = Mat::identity(&self.ring, self.rank_at(m)?);
        for n in m..k {
            acc = crate::linalg::mat_mul(&self.ring, self.map_at(n)?, &acc).expect("consecutive maps compose");
        }
        Some(acc)
    }

    /// Total rank of `⊕_{n ≤ depth} F_n`.
    pub fn total_rank(&self, depth: usize) -> Option<usize> {
        (1..=depth).map(|n| self.rank_at(n)).sum()
    }

    /// Every map `f_n`, tail included, is injective.
    pub fn maps_injective(&self) -> bool {
        let inj = |f: &Mat<R::Elem>| kernel_basis(&self.ring, f).cols() == 0;
        let tail_ok = match &self.tail {
            SystemTail::Truncated => true,
            SystemTail::Periodic { map, attach, .. } => inj(map) && attach.as_ref().is_none_or(inj),
        };
        self.maps.iter().all(inj) && tail_ok
    }

    /// The same system with every `f_n` replaced by `u_{n+1} f_n u_n^{-1}` (change of basis).
    pub fn conjugate(&self, bases: &dyn Fn(usize) -> (Mat<R::Elem>, Mat<R::Elem>)) -> Result<Self> {
        use crate::linalg::mat_mul;
        let ring = &self.ring;
        let d = self.ranks.len();
        let conj = |f: &Mat<R::Elem>, from: usize, to: usize| -> Result<Mat<R::Elem>> {
            let (_, inv) = bases(from);
            let (u, _) = bases(to);
            mat_mul(ring, &mat_mul(ring, &u, f)?, &inv)
        };
        let maps = (1..d).map(|n| conj(&self.maps[n - 1], n, n + 1)).collect::<Result<Vec<_>>>()?;
        let tail = match &self.tail {
            SystemTail::Truncated => SystemTail::Truncated,
            SystemTail::Periodic { rank, map, attach } => SystemTail::Periodic {
                rank: *rank,
                map: conj(map, d + 1, d + 1)?,
                attach: attach.as_ref().map(|a| conj(a, d, d + 1)).transpose()?,
            },
        };
        DirectSystem::new(ring, self.ranks.clone(), maps, tail)
    }
}

/// `φ` restricted to `⊕_{n ≤ depth} F_n → ⊕_{n ≤ depth+1} F_n`.
#[derive(Clone, Debug)]
pub struct PhiMap<E> {
    pub depth: usize,
    pub matrix: Mat<E>,
    pub injective: bool,
}

pub fn phi_map<R: EuclideanDomain>(d: &DirectSystem<R>, depth: usize) -> Result<PhiMap<R::Elem>> {
    let ring = d.ring();
    let too_short = || Error::InvalidInput(format!("direct system has fewer than {} levels", depth + 1));
    let rows = d.total_rank(depth + 1).ok_or_else(too_short)?;
    let cols = d.total_rank(depth).ok_or_else(too_short)?;
    let mut matrix = Mat::zeros(ring, rows, cols);
    let mut off = 0;
    for n in 1..=depth {
        let r = d.rank_at(n).expect("checked");
        matrix.set_block(off, off, &Mat::identity(ring, r));
        let f = d.map_at(n).ok_or_else(too_short)?;
        matrix.set_block(off + r, off, &crate::linalg::mat_neg(ring, f));
        off += r;
    }
    let injective = kernel_basis(ring, &matrix).cols() == 0;
    Ok(PhiMap { depth, matrix, injective })
}

fn hom_level<R: EuclideanDomain>(f: &Mat<R::Elem>, m: &FPModule<R>, source: &FPModule<R>, target: &FPModule<R>) -> ModuleMap<R> {
    // (g∘f)(e_j) = Σ_i f_ij g(e_i): block (j, i) of the matrix is f_ij · I
    let ring = m.ring();
    ModuleMap::new_unchecked(source, target, kronecker(ring, &f.transpose(), &Mat::identity(ring, m.gens())))
}

/// The tower `Hom(F_n, M) ≅ M^{r_n}` with connecting maps `g ↦ g∘f_n`.
pub fn hom_tower<R: EuclideanDomain>(d: &DirectSystem<R>, m: &FPModule<R>) -> Result<Tower<R>> {
    if m.ring() != d.ring() {
        return Err(Error::RingMismatch);
    }
    let prefix: Vec<FPModule<R>> = d.ranks.iter().map(|&r| m.power(r)).collect();
    let maps = d
        .maps
        .iter()
        .enumerate()
        .map(|(n, f)| hom_level(f, m, &prefix[n + 1], &prefix[n]))
        .collect();
    let tail = match &d.tail {
        SystemTail::Truncated => Tail::Truncated,
        SystemTail::Periodic { rank, map, attach } => {
            let h = m.power(*rank);
            Tail::Periodic {
                map: hom_level(map, m, &h, &h),
                attach: attach.as_ref().map(|a| hom_level(a, m, &h, prefix.last().expect("attach implies a prefix"))),
                module: h,
            }
        }
    };
    Tower::new(prefix, maps, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Integers;
    use crate::module::apply_hom_contra;
    use crate::tower::{ml_check, Verdict};
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    pub(crate) fn zmat(rows: &[&[i64]]) -> Mat<BigInt> {
        let c = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| z(x)).collect()).collect(), c).unwrap()
    }

    #[test]
    fn phi_examples() {
        let r = Integers;
        let tele = DirectSystem::periodic(&r, zmat(&[&[2]])).unwrap();
        let phi = phi_map(&tele, 2).unwrap();
        assert_eq!(phi.matrix, zmat(&[&[1, 0], &[-2, 1], &[0, -2]]));
        assert!(phi.injective);
        assert_eq!(phi_map(&tele, 1).unwrap().matrix, zmat(&[&[1], &[-2]]));
        let zero = DirectSystem::periodic(&r, zmat(&[&[0, 0], &[0, 0]])).unwrap();
        let phi = phi_map(&zero, 2).unwrap();
        assert_eq!(phi.matrix, zmat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]));
    }

    #[test]
    fn hom_towers() {
        let r = Integers;
        let f = zmat(&[&[1, 2], &[0, 3], &[4, 5]]);
        let d = DirectSystem::new(&r, vec![2, 3], vec![f.clone()], SystemTail::Truncated).unwrap();
        let t = hom_tower(&d, &FPModule::free(&r, 1)).unwrap();
        assert_eq!(t.map_at(1).unwrap().matrix(), &f.transpose());

        let tele = DirectSystem::periodic(&r, zmat(&[&[2]])).unwrap();
        let z4 = FPModule::cyclic(&r, &z(4));
        let t = hom_tower(&tele, &z4).unwrap();
        let rep = ml_check(&t, 0);
        assert_eq!(rep.verdict, Verdict::Stationary);
        assert_eq!(rep.l_at(1), Some(3));

        let id = DirectSystem::periodic(&r, zmat(&[&[1, 0], &[0, 1]])).unwrap();
        let t = hom_tower(&id, &z4).unwrap();
        assert!(t.map_at(5).unwrap().equals(&ModuleMap::identity(&z4.power(2))));
    }

    #[test]
    fn hom_tower_matches_precomposition() {
        let r = Integers;
        let f = zmat(&[&[1, 2], &[3, 0], &[1, 1]]);
        let m = FPModule::from_orders(&r, &[z(6), z(0)]);
        let d = DirectSystem::new(&r, vec![2, 3], vec![f.clone()], SystemTail::Truncated).unwrap();
        let t = hom_tower(&d, &m).unwrap();
        let fmap = ModuleMap::new(&FPModule::free(&r, 2), &FPModule::free(&r, 3), f).unwrap();
        let induced = apply_hom_contra(&fmap, &m).unwrap();
        // a sample of maps F_3 → M, as columns g(e_i) stacked
        for seed in 0..6i64 {
            let g: Vec<BigInt> = (0..6).map(|i| z((seed * 7 + i * 3) % 11 - 5)).collect();
            let via_tower = t.map_at(1).unwrap().apply(&g).unwrap();
            let gmap = ModuleMap::new(&FPModule::free(&r, 3), &m, Mat::from_fn(2, 3, |row, col| g[col * 2 + row].clone())).unwrap();
            let y = induced.source.encode(&gmap).unwrap();
            let x = induced.target.decode(&induced.map.apply(&y).unwrap()).unwrap();
            let flat: Vec<BigInt> = (0..2).flat_map(|c| (0..2).map(move |row| (row, c))).map(|(row, c)| x.matrix().at(row, c).clone()).collect();
            assert!(t.module_at(1).unwrap().elems_equal(&via_tower, &flat));
        }
    }
}
