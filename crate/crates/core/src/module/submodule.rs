use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, mat_scale, rank, snf, EuclideanDomain, LinearSolver, Mat};

use super::{FPModule, ModuleMap};

/// Submodule of an FP module spanned by the columns of `gens`.
#[derive(Clone, Debug)]
pub struct Submodule<R: EuclideanDomain> {
    ambient: FPModule<R>,
    gens: Mat<R::Elem>,
}

impl<R: EuclideanDomain> Submodule<R> {
    pub fn new(ambient: &FPModule<R>, gens: Mat<R::Elem>) -> Result<Self> {
        if gens.rows() != ambient.gens() {
            return Err(Error::DimensionMismatch(format!(
                "submodule generators have {} coordinates, ambient has {} generators",
                gens.rows(),
                ambient.gens()
            )));
        }
        Ok(Submodule::new_unchecked(ambient, gens))
    }

    pub(crate) fn new_unchecked(ambient: &FPModule<R>, gens: Mat<R::Elem>) -> Self {
        Submodule { ambient: ambient.clone(), gens }
    }

    pub fn from_elements(ambient: &FPModule<R>, elems: &[Vec<R::Elem>]) -> Result<Self> {
        for e in elems {
            ambient.check_element(e)?;
        }
        Ok(Submodule::new_unchecked(ambient, Mat::from_columns(ambient.gens(), elems)))
    }

    pub fn zero(ambient: &FPModule<R>) -> Self {
        Submodule::new_unchecked(ambient, Mat::zeros(ambient.ring(), ambient.gens(), 0))
    }

    pub fn whole(ambient: &FPModule<R>) -> Self {
        Submodule::new_unchecked(ambient, Mat::identity(ambient.ring(), ambient.gens()))
    }

    pub fn ambient(&self) -> &FPModule<R> {
        &self.ambient
    }

    pub fn generators(&self) -> &Mat<R::Elem> {
        &self.gens
    }

    fn ring(&self) -> &R {
        self.ambient.ring()
    }

    fn spanning_matrix(&self) -> Mat<R::Elem> {
        self.gens.hcat(self.ambient.relations()).expect("same row count")
    }

    /// Solver for membership; reuse it for many queries against one submodule.
    pub fn membership_solver(&self) -> LinearSolver<R> {
        LinearSolver::new(self.ring(), &self.spanning_matrix())
    }

    /// Coefficients `a` with `v = gens a` modulo relations, if `v` lies in the submodule.
    pub fn express(&self, v: &[R::Elem]) -> Result<Option<Vec<R::Elem>>> {
        self.ambient.check_element(v)?;
        let sol = self.membership_solver().solve(v)?;
        Ok(sol.map(|x| x[..self.gens.cols()].to_vec()))
    }

    pub fn contains(&self, v: &[R::Elem]) -> bool {
        self.express(v).ok().flatten().is_some()
    }

    /// A generator of `self` outside `other`, if any.
    pub fn subset_witness(&self, other: &Submodule<R>) -> Option<Vec<R::Elem>> {
        let solver = other.membership_solver();
        self.gens
            .columns()
            .into_iter()
            .find(|c| solver.solve(c).expect("dimensions agree").is_none())
    }

    pub fn is_subset(&self, other: &Submodule<R>) -> bool {
        self.ambient == other.ambient && self.subset_witness(other).is_none()
    }

    pub fn equals(&self, other: &Submodule<R>) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.columns().iter().all(|c| self.ambient.is_zero_elem(c))
    }

    pub fn is_whole(&self) -> bool {
        Submodule::whole(&self.ambient).is_subset(self)
    }

    /// At most `ambient.gens()` generators for the same submodule.
    pub fn compact(&self) -> Submodule<R> {
        let ring = self.ring();
        let s = snf(ring, &self.spanning_matrix());
        let cols: Vec<Vec<R::Elem>> = (0..s.rank())
            .map(|i| {
                let c: Vec<R::Elem> = s.u_inv.column(i).iter().map(|x| ring.mul(x, &s.factors[i])).collect();
                self.ambient.reduce(&c)
            })
            .filter(|c| !self.ambient.is_zero_elem(c))
            .collect();
        Submodule::new_unchecked(&self.ambient, Mat::from_columns(self.ambient.gens(), &cols))
    }

    pub fn sum(&self, other: &Submodule<R>) -> Result<Submodule<R>> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("submodules of different modules".into()));
        }
        Ok(Submodule::new_unchecked(&self.ambient, self.gens.hcat(&other.gens)?))
    }

    pub fn intersect(&self, other: &Submodule<R>) -> Result<Submodule<R>> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("submodules of different modules".into()));
        }
        let ring = self.ring();
        let a = self.gens.cols();
        let neg_other = mat_scale(ring, &ring.neg(&ring.one()), &other.gens);
        let stacked = self.spanning_matrix().hcat(&neg_other)?;
        // columns of `stacked` after the relations carry no constraint on the coefficients of `self`
        let k = kernel_basis(ring, &stacked);
        let coeffs = k.select_rows(&(0..a).collect::<Vec<_>>());
        let gens = crate::linalg::mat_mul(ring, &self.gens, &coeffs)?;
        Ok(Submodule::new_unchecked(&self.ambient, gens).compact())
    }

    pub fn scaled(&self, r: &R::Elem) -> Submodule<R> {
        Submodule::new_unchecked(&self.ambient, mat_scale(self.ring(), r, &self.gens))
    }

    pub fn image_under(&self, f: &ModuleMap<R>) -> Result<Submodule<R>> {
        if f.source() != &self.ambient {
            return Err(Error::DimensionMismatch("map does not start at the ambient module".into()));
        }
        let g = crate::linalg::mat_mul(self.ring(), f.matrix(), &self.gens)?;
        Ok(Submodule::new_unchecked(f.target(), g))
    }

    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        let ring = self.ring();
        rank(ring, &self.spanning_matrix()) - rank(ring, self.ambient.relations())
    }

    /// A presentation of the submodule as a module on the given generators.
    pub fn to_module(&self) -> FPModule<R> {
        let ring = self.ring();
        let k = kernel_basis(ring, &self.spanning_matrix());
        let rel = k.select_rows(&(0..self.gens.cols()).collect::<Vec<_>>());
        FPModule::new(ring, rel)
    }

    pub fn inclusion(&self) -> ModuleMap<R> {
        ModuleMap::new_unchecked(&self.to_module(), &self.ambient, self.gens.clone())
    }

    /// `ambient / self` and the projection onto it.
    pub fn quotient(&self) -> (FPModule<R>, ModuleMap<R>) {
        self.inclusion().cokernel()
    }
}
