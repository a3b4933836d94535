//! Finitely presented modules over a Euclidean domain.
//!
//! A module is `R^n / A R^k` for a relation matrix `A` with `n` rows. The
//! Smith form of `A` is computed once on construction; it gives the
//! invariant factor decomposition used for normal forms, zero tests and
//! canonical element representatives.

mod hom;
mod homotopy;
mod linsys;
mod map;
mod purity;
mod submodule;
mod torsion;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{mat_vec, snf, EuclideanDomain, Mat};

pub use hom::{apply_hom_contra, apply_hom_contra_with, apply_hom_cov, ext1, ext1_of_presentation, hom_module, hom_module_with, HomInduced, HomModule, Limits};
pub use homotopy::{homotopy_transfer, Diagram, TransferDirection};
pub use linsys::{Constraint, MatrixEquation};
pub use map::{factor_left, factor_right, ModuleMap};
pub use purity::{is_pure_submodule, pure_intersection_check, IntersectionVerdict, PurityVerdict};
pub use submodule::Submodule;
pub use torsion::{divisible_part, finite_mu_check, torsion_submodule, DivisiblePart, MuVerdict};

/// Invariant factor decomposition `R^free_rank ⊕ R/d_1 ⊕ ... ⊕ R/d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm<E> {
    pub free_rank: usize,
    pub factors: Vec<E>,
}

impl<E: fmt::Display> NormalForm<E> {
    pub fn render(&self, symbol: &str) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(symbol.to_string()),
            r => parts.push(format!("{symbol}^{r}")),
        }
        for d in &self.factors {
            let d = d.to_string();
            if d.contains(' ') {
                parts.push(format!("{symbol}/({d})"));
            } else {
                parts.push(format!("{symbol}/{d}"));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

impl<E: fmt::Display> Serialize for NormalForm<E> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NormalForm", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let f: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        st.serialize_field("factors", &f)?;
        st.end()
    }
}

/// One cyclic summand of the decomposition: `R/order` (`order = 0` is free).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component<E> {
    /// Index in the Smith basis of the generators.
    pub index: usize,
    pub order: E,
}

#[derive(Debug)]
struct Structure<R: EuclideanDomain> {
    u: Mat<R::Elem>,
    u_inv: Mat<R::Elem>,
    /// Canonical diagonal entry per generator (zero for free directions).
    diag: Vec<R::Elem>,
}

#[derive(Debug)]
struct ModuleData<R: EuclideanDomain> {
    ring: R,
    relations: Mat<R::Elem>,
    structure: Structure<R>,
}

#[derive(Clone, Debug)]
pub struct FPModule<R: EuclideanDomain> {
    inner: Arc<ModuleData<R>>,
}

impl<R: EuclideanDomain> FPModule<R> {
    /// The module with `relations.rows()` generators and the columns of
    /// `relations` as relators.
    pub fn new(ring: &R, relations: Mat<R::Elem>) -> Self {
        let s = snf(ring, &relations);
        let n = relations.rows();
        let diag = (0..n).map(|i| ring.canonical(&s.diag(ring, i))).collect();
        FPModule {
            inner: Arc::new(ModuleData {
                ring: ring.clone(),
                relations,
                structure: Structure { u: s.u, u_inv: s.u_inv, diag },
            }),
        }
    }

    pub fn with_relations(ring: &R, gens: usize, relations: Mat<R::Elem>) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} rows for {gens} generators",
                relations.rows()
            )));
        }
        Ok(FPModule::new(ring, relations))
    }

    pub fn free(ring: &R, rank: usize) -> Self {
        FPModule::new(ring, Mat::zeros(ring, rank, 0))
    }

    pub fn zero(ring: &R) -> Self {
        FPModule::free(ring, 0)
    }

    /// `R / d R` on one generator.
    pub fn cyclic(ring: &R, d: &R::Elem) -> Self {
        FPModule::new(ring, Mat::from_fn(1, 1, |_, _| d.clone()))
    }

    /// Direct sum of invariant-factor style summands `⊕ R/d_i` (zero = free).
    pub fn from_orders(ring: &R, orders: &[R::Elem]) -> Self {
        FPModule::new(ring, Mat::diagonal(ring, orders))
    }

    pub fn direct_sum(ring: &R, parts: &[FPModule<R>]) -> Self {
        let blocks: Vec<Mat<R::Elem>> = parts.iter().map(|m| m.relations().clone()).collect();
        FPModule::new(ring, Mat::block_diagonal(ring, &blocks))
    }

    /// `copies` copies of `self`.
    pub fn power(&self, copies: usize) -> Self {
        FPModule::direct_sum(self.ring(), &vec![self.clone(); copies])
    }

    pub fn ring(&self) -> &R {
        &self.inner.ring
    }

    pub fn gens(&self) -> usize {
        self.inner.relations.rows()
    }

    pub fn relations(&self) -> &Mat<R::Elem> {
        &self.inner.relations
    }

    pub fn same_ring(&self, other: &FPModule<R>) -> Result<()> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Smith basis transform: coordinates `v` become `u v`.
    pub fn smith_transform(&self) -> &Mat<R::Elem> {
        &self.inner.structure.u
    }

    pub fn smith_inverse(&self) -> &Mat<R::Elem> {
        &self.inner.structure.u_inv
    }

    /// Nontrivial cyclic summands, in Smith order.
    pub fn components(&self) -> Vec<Component<R::Elem>> {
        let ring = self.ring();
        self.inner
            .structure
            .diag
            .iter()
            .enumerate()
            .filter(|(_, d)| !ring.is_unit(d))
            .map(|(index, d)| Component { index, order: d.clone() })
            .collect()
    }

    /// Element (in generator coordinates) generating Smith summand `index`.
    pub fn component_generator(&self, index: usize) -> Vec<R::Elem> {
        self.inner.structure.u_inv.column(index)
    }

    pub fn normal_form(&self) -> NormalForm<R::Elem> {
        let ring = self.ring();
        let diag = &self.inner.structure.diag;
        let factors: Vec<R::Elem> = diag
            .iter()
            .filter(|d| !ring.is_zero(d) && !ring.is_unit(d))
            .cloned()
            .collect();
        NormalForm { free_rank: diag.iter().filter(|d| ring.is_zero(d)).count(), factors }
    }

    pub fn render(&self) -> String {
        self.normal_form().render(&self.ring().symbol())
    }

    pub fn is_isomorphic(&self, other: &FPModule<R>) -> bool {
        self.ring() == other.ring() && self.normal_form() == other.normal_form()
    }

    pub fn is_zero_module(&self) -> bool {
        self.components().is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.normal_form().free_rank
    }

    /// Torsion modules over the supported rings are finite sets.
    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Bound on the length of any strictly descending chain of submodules
    /// of the torsion part.
    pub fn torsion_length_bound(&self) -> u64 {
        let ring = self.ring();
        self.normal_form().factors.iter().map(|d| ring.length_bound(d)).sum()
    }

    pub fn check_element(&self, v: &[R::Elem]) -> Result<()> {
        if v.len() != self.gens() {
            return Err(Error::DimensionMismatch(format!(
                "element with {} coordinates in module with {} generators",
                v.len(),
                self.gens()
            )));
        }
        Ok(())
    }

    /// Coordinates in the Smith basis, torsion coordinates reduced, trivial
    /// summands dropped. Equal elements have equal canonical coordinates.
    pub fn canonical_coords(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        let ring = self.ring();
        let c = mat_vec(ring, &self.inner.structure.u, v).expect("element length checked by caller");
        self.inner
            .structure
            .diag
            .iter()
            .zip(c)
            .filter(|(d, _)| !ring.is_unit(d))
            .map(|(d, x)| ring.rem(&x, d))
            .collect()
    }

    /// Canonical representative of the class of `v`.
    pub fn reduce(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        let ring = self.ring();
        let c = mat_vec(ring, &self.inner.structure.u, v).expect("element length checked by caller");
        let reduced: Vec<R::Elem> = self
            .inner
            .structure
            .diag
            .iter()
            .zip(c)
            .map(|(d, x)| if ring.is_unit(d) { ring.zero() } else { ring.rem(&x, d) })
            .collect();
        mat_vec(ring, &self.inner.structure.u_inv, &reduced).expect("square transform")
    }

    pub fn reduce_columns(&self, m: &Mat<R::Elem>) -> Mat<R::Elem> {
        let cols: Vec<Vec<R::Elem>> = m.columns().iter().map(|c| self.reduce(c)).collect();
        Mat::from_columns(self.gens(), &cols)
    }

    pub fn is_zero_elem(&self, v: &[R::Elem]) -> bool {
        let ring = self.ring();
        self.canonical_coords(v).iter().all(|x| ring.is_zero(x))
    }

    pub fn elems_equal(&self, a: &[R::Elem], b: &[R::Elem]) -> bool {
        self.canonical_coords(a) == self.canonical_coords(b)
    }

    pub fn unit_vector(&self, i: usize) -> Vec<R::Elem> {
        let ring = self.ring();
        (0..self.gens()).map(|k| if k == i { ring.one() } else { ring.zero() }).collect()
    }

    pub fn zero_elem(&self) -> Vec<R::Elem> {
        vec![self.ring().zero(); self.gens()]
    }

    /// Generator offsets of the summands of a direct sum of `parts`.
    pub fn block_offsets(parts: &[FPModule<R>]) -> Vec<usize> {
        let mut acc = 0;
        parts
            .iter()
            .map(|m| {
                let o = acc;
                acc += m.gens();
                o
            })
            .collect()
    }
}

impl<R: EuclideanDomain> PartialEq for FPModule<R> {
    /// Equality of presentations (not isomorphism).
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.ring() == other.ring() && self.relations() == other.relations())
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

    #[test]
    fn normal_form_of_sum() {
        let r = Integers;
        let m = FPModule::from_orders(&r, &[z(2), z(3), z(4)]);
        assert_eq!(m.normal_form().factors, vec![z(2), z(12)]);
        assert_eq!(m.render(), "Z/2 ⊕ Z/12");
        let f = FPModule::from_orders(&r, &[z(6), z(0)]);
        assert_eq!(f.render(), "Z ⊕ Z/6");
        assert_eq!(FPModule::zero(&r).render(), "0");
        assert!(FPModule::cyclic(&r, &z(-1)).is_zero_module());
    }

    #[test]
    fn element_arithmetic_mod_relations() {
        let r = Integers;
        let m = FPModule::from_orders(&r, &[z(6), z(0)]);
        assert!(m.is_zero_elem(&[z(12), z(0)]));
        assert!(!m.is_zero_elem(&[z(3), z(0)]));
        assert!(m.elems_equal(&[z(7), z(5)], &[z(1), z(5)]));
        assert_eq!(m.reduce(&[z(-1), z(2)]), vec![z(5), z(2)]);
    }

    #[test]
    fn isomorphism_by_normal_form() {
        let r = Integers;
        let a = FPModule::from_orders(&r, &[z(2), z(3)]);
        let b = FPModule::cyclic(&r, &z(6));
        assert!(a.is_isomorphic(&b));
        assert_ne!(a, b);
        let rel = Mat::from_rows(vec![vec![z(2), z(4)], vec![z(6), z(8)]], 2).unwrap();
        let c = FPModule::with_relations(&r, 2, rel).unwrap();
        assert!(c.is_isomorphic(&FPModule::from_orders(&r, &[z(2), z(4)])));
    }
}
