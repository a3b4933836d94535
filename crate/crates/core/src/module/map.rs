use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, mat_mul, mat_vec, EuclideanDomain, LinearSolver, Mat};

use super::linsys::{Constraint, MatrixEquation};
use super::{FPModule, Submodule};

/// Homomorphism given by its matrix on generators: column `j` is the image
/// of source generator `j` in target generator coordinates.
#[derive(Clone, Debug)]
pub struct ModuleMap<R: EuclideanDomain> {
    source: FPModule<R>,
    target: FPModule<R>,
    matrix: Mat<R::Elem>,
}

impl<R: EuclideanDomain> ModuleMap<R> {
    pub fn new(source: &FPModule<R>, target: &FPModule<R>, matrix: Mat<R::Elem>) -> Result<Self> {
        source.same_ring(target)?;
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.gens(),
                source.gens()
            )));
        }
        let ring = source.ring();
        let images = mat_mul(ring, &matrix, source.relations())?;
        for (k, col) in images.columns().iter().enumerate() {
            if !target.is_zero_elem(col) {
                return Err(Error::NotWellDefined(format!("relation {k} is not sent to zero")));
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), matrix })
    }

    /// Skips the relation check; for maps that are well defined by construction.
    pub(crate) fn new_unchecked(source: &FPModule<R>, target: &FPModule<R>, matrix: Mat<R::Elem>) -> Self {
        debug_assert!(matrix.rows() == target.gens() && matrix.cols() == source.gens());
        ModuleMap { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn identity(m: &FPModule<R>) -> Self {
        ModuleMap::new_unchecked(m, m, Mat::identity(m.ring(), m.gens()))
    }

    pub fn zero(source: &FPModule<R>, target: &FPModule<R>) -> Self {
        ModuleMap::new_unchecked(source, target, Mat::zeros(source.ring(), target.gens(), source.gens()))
    }

    pub fn source(&self) -> &FPModule<R> {
        &self.source
    }

    pub fn target(&self) -> &FPModule<R> {
        &self.target
    }

    pub fn matrix(&self) -> &Mat<R::Elem> {
        &self.matrix
    }

    pub fn ring(&self) -> &R {
        self.source.ring()
    }

    pub fn apply(&self, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
        self.source.check_element(v)?;
        Ok(self.target.reduce(&mat_vec(self.ring(), &self.matrix, v)?))
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &ModuleMap<R>) -> Result<ModuleMap<R>> {
        if first.target != self.source {
            return Err(Error::DimensionMismatch("maps are not composable".into()));
        }
        let m = mat_mul(self.ring(), &self.matrix, &first.matrix)?;
        Ok(ModuleMap::new_unchecked(&first.source, &self.target, self.target.reduce_columns(&m)))
    }

    pub fn add(&self, other: &ModuleMap<R>) -> Result<ModuleMap<R>> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::DimensionMismatch("maps have different source or target".into()));
        }
        let m = crate::linalg::mat_add(self.ring(), &self.matrix, &other.matrix)?;
        Ok(ModuleMap::new_unchecked(&self.source, &self.target, self.target.reduce_columns(&m)))
    }

    pub fn neg(&self) -> ModuleMap<R> {
        let m = crate::linalg::mat_neg(self.ring(), &self.matrix);
        ModuleMap::new_unchecked(&self.source, &self.target, self.target.reduce_columns(&m))
    }

    /// Equality as homomorphisms: every generator has the same image.
    pub fn equals(&self, other: &ModuleMap<R>) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..self.source.gens())
                .all(|j| self.target.elems_equal(&self.matrix.column(j), &other.matrix.column(j)))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.columns().iter().all(|c| self.target.is_zero_elem(c))
    }

    pub fn image(&self) -> Submodule<R> {
        Submodule::new_unchecked(&self.target, self.matrix.clone())
    }

    /// Kernel as a submodule of the source: `x` with `X x ∈ im(rel_target)`.
    pub fn kernel(&self) -> Submodule<R> {
        let ring = self.ring();
        let n = self.source.gens();
        let stacked = self.matrix.hcat(self.target.relations()).expect("same row count");
        let k = kernel_basis(ring, &stacked);
        let idx: Vec<usize> = (0..n).collect();
        let gens = k.select_rows(&idx);
        Submodule::new_unchecked(&self.source, gens)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        let solver = LinearSolver::new(self.ring(), &self.matrix.hcat(self.target.relations()).expect("same row count"));
        (0..self.target.gens()).all(|i| {
            solver.solve(&self.target.unit_vector(i)).expect("dimensions agree").is_some()
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Cokernel `target / image` with the projection from the target.
    pub fn cokernel(&self) -> (FPModule<R>, ModuleMap<R>) {
        let rel = self.target.relations().hcat(&self.matrix).expect("same row count");
        let c = FPModule::new(self.ring(), rel);
        let p = ModuleMap::new_unchecked(&self.target, &c, Mat::identity(self.ring(), self.target.gens()));
        (c, p)
    }
}

/// Some `p: B → C` with `p ∘ a = b`, for `a: A → B` and `b: A → C`.
pub fn factor_left<R: EuclideanDomain>(a: &ModuleMap<R>, b: &ModuleMap<R>) -> Result<Option<ModuleMap<R>>> {
    if a.source() != b.source() {
        return Err(Error::DimensionMismatch("maps have different sources".into()));
    }
    let ring = a.ring();
    let (bm, cm) = (a.target(), b.target());
    let ident = Mat::identity(ring, cm.gens());
    let mut eq = MatrixEquation::new(cm.gens(), bm.gens());
    eq.push(Constraint::single(ident.clone(), a.matrix().clone(), b.matrix().clone(), cm.relations().clone()));
    eq.push(Constraint::single(
        ident,
        bm.relations().clone(),
        Mat::zeros(ring, cm.gens(), bm.relations().cols()),
        cm.relations().clone(),
    ));
    Ok(eq.solve(ring)?.map(|p| ModuleMap::new_unchecked(bm, cm, cm.reduce_columns(&p))))
}

/// Some `p: X → A` with `a ∘ p = b`, for `a: A → B` and `b: X → B`.
pub fn factor_right<R: EuclideanDomain>(a: &ModuleMap<R>, b: &ModuleMap<R>) -> Result<Option<ModuleMap<R>>> {
    if a.target() != b.target() {
        return Err(Error::DimensionMismatch("maps have different targets".into()));
    }
    let ring = a.ring();
    let (am, xm) = (a.source(), b.source());
    let mut eq = MatrixEquation::new(am.gens(), xm.gens());
    eq.push(Constraint::single(
        a.matrix().clone(),
        Mat::identity(ring, xm.gens()),
        b.matrix().clone(),
        a.target().relations().clone(),
    ));
    eq.push(Constraint::single(
        Mat::identity(ring, am.gens()),
        xm.relations().clone(),
        Mat::zeros(ring, am.gens(), xm.relations().cols()),
        am.relations().clone(),
    ));
    Ok(eq.solve(ring)?.map(|p| ModuleMap::new_unchecked(xm, am, am.reduce_columns(&p))))
}
