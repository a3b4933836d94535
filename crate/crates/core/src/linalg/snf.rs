//! Smith normal form with unimodular transforms, and the linear solvers
//! built on it.

use serde::Serialize;

use super::matrix::{mat_vec, Mat};
use super::ring::EuclideanDomain;
use crate::error::{Error, Result};

/// `u * a * v = d`, with `u_inv`, `v_inv` the inverses of the transforms.
#[derive(Clone, Debug)]
pub struct SnfDecomposition<R: EuclideanDomain> {
    pub u: Mat<R::Elem>,
    pub d: Mat<R::Elem>,
    pub v: Mat<R::Elem>,
    pub u_inv: Mat<R::Elem>,
    pub v_inv: Mat<R::Elem>,
    /// Nonzero diagonal entries in canonical form; `factors[i] | factors[i+1]`.
    pub factors: Vec<R::Elem>,
}

impl<R: EuclideanDomain> SnfDecomposition<R> {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Diagonal entry `i` of `d`, zero past the diagonal.
    pub fn diag(&self, ring: &R, i: usize) -> R::Elem {
        if i < self.d.rows() && i < self.d.cols() {
            self.d.at(i, i).clone()
        } else {
            ring.zero()
        }
    }
}

struct Reducer<'a, R: EuclideanDomain> {
    ring: &'a R,
    d: Mat<R::Elem>,
    u: Mat<R::Elem>,
    u_inv: Mat<R::Elem>,
    v: Mat<R::Elem>,
    v_inv: Mat<R::Elem>,
}

impl<R: EuclideanDomain> Reducer<'_, R> {
    // row_i += c * row_t
    fn row_add(&mut self, i: usize, t: usize, c: &R::Elem) {
        let ring = self.ring;
        for m in [&mut self.d, &mut self.u] {
            for j in 0..m.cols() {
                let add = ring.mul(c, m.at(t, j));
                if !ring.is_zero(&add) {
                    let v = ring.add(m.at(i, j), &add);
                    m.set(i, j, v);
                }
            }
        }
        // u_inv <- u_inv (I - c e_it): col_t -= c col_i
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let sub = ring.mul(c, m.at(r, i));
            if !ring.is_zero(&sub) {
                let v = ring.sub(m.at(r, t), &sub);
                m.set(r, t, v);
            }
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn row_scale(&mut self, i: usize, unit: &R::Elem) {
        let ring = self.ring;
        let inv = ring.unit_inverse(unit).expect("scaling by a unit");
        for m in [&mut self.d, &mut self.u] {
            for j in 0..m.cols() {
                let v = ring.mul(unit, m.at(i, j));
                m.set(i, j, v);
            }
        }
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let v = ring.mul(m.at(r, i), &inv);
            m.set(r, i, v);
        }
    }

    // col_j += c * col_t
    fn col_add(&mut self, j: usize, t: usize, c: &R::Elem) {
        let ring = self.ring;
        for m in [&mut self.d, &mut self.v] {
            for r in 0..m.rows() {
                let add = ring.mul(c, m.at(r, t));
                if !ring.is_zero(&add) {
                    let v = ring.add(m.at(r, j), &add);
                    m.set(r, j, v);
                }
            }
        }
        // v_inv <- (I - c e_tj) v_inv: row_t -= c row_j
        let m = &mut self.v_inv;
        for k in 0..m.cols() {
            let sub = ring.mul(c, m.at(j, k));
            if !ring.is_zero(&sub) {
                let v = ring.sub(m.at(t, k), &sub);
                m.set(t, k, v);
            }
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// Smallest nonzero entry of the trailing submatrix, row-major ties.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, R::Size)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let e = self.d.at(i, j);
                if self.ring.is_zero(e) {
                    continue;
                }
                let s = self.ring.size(e);
                if best.as_ref().map_or(true, |(_, _, b)| s < *b) {
                    best = Some((i, j, s));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let ring = self.ring;
        let n = self.d.rows().min(self.d.cols());
        for t in 0..n {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut clean = true;
                let pivot = self.d.at(t, t).clone();
                for i in t + 1..self.d.rows() {
                    if ring.is_zero(self.d.at(i, t)) {
                        continue;
                    }
                    let (q, r) = ring.div_rem(self.d.at(i, t), &pivot);
                    self.row_add(i, t, &ring.neg(&q));
                    clean &= ring.is_zero(&r);
                }
                for j in t + 1..self.d.cols() {
                    if ring.is_zero(self.d.at(t, j)) {
                        continue;
                    }
                    let (q, r) = ring.div_rem(self.d.at(t, j), &pivot);
                    self.col_add(j, t, &ring.neg(&q));
                    clean &= ring.is_zero(&r);
                }
                if !clean {
                    let (pi, pj) = self.min_entry(t).expect("nonzero remainder exists");
                    self.row_swap(t, pi);
                    self.col_swap(t, pj);
                    continue;
                }
                // pivot must divide the whole trailing block
                let offender = (t + 1..self.d.rows()).find(|&i| {
                    (t + 1..self.d.cols()).any(|j| !ring.divides(&pivot, self.d.at(i, j)))
                });
                match offender {
                    Some(i) => self.row_add(t, i, &ring.one()),
                    None => break,
                }
            }
            let (unit, _) = ring.normalize(self.d.at(t, t));
            let inv = ring.unit_inverse(&unit).expect("normalize returns a unit");
            if !ring.is_zero(&ring.sub(&inv, &ring.one())) {
                self.row_scale(t, &inv);
            }
        }
    }
}

/// Smith normal form of `a`.
pub fn snf<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>) -> SnfDecomposition<R> {
    let (m, n) = (a.rows(), a.cols());
    let mut red = Reducer {
        ring,
        d: a.clone(),
        u: Mat::identity(ring, m),
        u_inv: Mat::identity(ring, m),
        v: Mat::identity(ring, n),
        v_inv: Mat::identity(ring, n),
    };
    red.run();
    let factors = (0..m.min(n))
        .map(|i| red.d.at(i, i).clone())
        .take_while(|x| !ring.is_zero(x))
        .collect();
    SnfDecomposition { u: red.u, d: red.d, v: red.v, u_inv: red.u_inv, v_inv: red.v_inv, factors }
}

/// Reusable solver for `a * x = b` with a fixed `a`.
#[derive(Clone, Debug)]
pub struct LinearSolver<R: EuclideanDomain> {
    ring: R,
    rows: usize,
    cols: usize,
    snf: SnfDecomposition<R>,
}

impl<R: EuclideanDomain> LinearSolver<R> {
    pub fn new(ring: &R, a: &Mat<R::Elem>) -> Self {
        LinearSolver { ring: ring.clone(), rows: a.rows(), cols: a.cols(), snf: snf(ring, a) }
    }

    pub fn decomposition(&self) -> &SnfDecomposition<R> {
        &self.snf
    }

    pub fn solve(&self, b: &[R::Elem]) -> Result<Option<Vec<R::Elem>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let ring = &self.ring;
        let c = mat_vec(ring, &self.snf.u, b)?;
        let rank = self.snf.rank();
        let mut y = vec![ring.zero(); self.cols];
        for (i, ci) in c.iter().enumerate() {
            if i < rank {
                match ring.div_exact(ci, &self.snf.factors[i]) {
                    Some(q) => y[i] = q,
                    None => return Ok(None),
                }
            } else if !ring.is_zero(ci) {
                return Ok(None);
            }
        }
        Ok(Some(mat_vec(ring, &self.snf.v, &y)?))
    }
}

/// Some `x` with `a * x = b`, or `None` when no solution exists over the ring.
pub fn solve_linear<R: EuclideanDomain>(
    ring: &R,
    a: &Mat<R::Elem>,
    b: &[R::Elem],
) -> Result<Option<Vec<R::Elem>>> {
    LinearSolver::new(ring, a).solve(b)
}

/// Columns generating (for PIDs: a basis of) the kernel of `a`.
pub fn kernel_basis<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    let s = snf(ring, a);
    let idx: Vec<usize> = (s.rank()..a.cols()).collect();
    s.v.select_columns(&idx)
}

/// Rank over the fraction field.
pub fn rank<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>) -> usize {
    snf(ring, a).rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CokernelInvariants<E> {
    /// Non-unit invariant factors, canonical, in divisibility order.
    pub factors: Vec<E>,
    pub free_rank: usize,
}

/// Invariant factors and free rank of `R^rows / a R^cols`.
pub fn cokernel_invariants<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>) -> CokernelInvariants<R::Elem> {
    let s = snf(ring, a);
    CokernelInvariants {
        factors: s.factors.iter().filter(|d| !ring.is_unit(d)).cloned().collect(),
        free_rank: a.rows() - s.rank(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{determinant, mat_mul};
    use crate::linalg::ring::{GfPoly, Integers};
    use num_bigint::BigInt;

    fn zmat(rows: &[&[i64]]) -> Mat<BigInt> {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
        .unwrap()
    }

    fn check<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>) -> SnfDecomposition<R> {
        let s = snf(ring, a);
        let uav = mat_mul(ring, &mat_mul(ring, &s.u, a).unwrap(), &s.v).unwrap();
        assert_eq!(uav, s.d);
        assert_eq!(mat_mul(ring, &s.u, &s.u_inv).unwrap(), Mat::identity(ring, a.rows()));
        assert_eq!(mat_mul(ring, &s.v_inv, &s.v).unwrap(), Mat::identity(ring, a.cols()));
        assert!(ring.is_unit(&determinant(ring, &s.u).unwrap()));
        assert!(ring.is_unit(&determinant(ring, &s.v).unwrap()));
        for w in s.factors.windows(2) {
            assert!(ring.divides(&w[0], &w[1]));
        }
        s
    }

    #[test]
    fn zero_matrix() {
        let z = Integers;
        let s = check(&z, &zmat(&[&[0, 0], &[0, 0]]));
        assert!(s.factors.is_empty());
        assert_eq!(s.u, Mat::identity(&z, 2));
        assert_eq!(s.v, Mat::identity(&z, 2));
    }

    #[test]
    fn identity_matrix() {
        let z = Integers;
        let s = check(&z, &Mat::identity(&z, 4));
        assert_eq!(s.factors, vec![BigInt::from(1); 4]);
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&Integers, &zmat(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.factors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2,3) is diagonal but not Smith: expect 1, 6
        let s = check(&Integers, &zmat(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.factors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular() {
        let s = check(&Integers, &zmat(&[&[1, 2, 3], &[4, 5, 6]]));
        assert_eq!(s.factors, vec![BigInt::from(1), BigInt::from(3)]);
        check(&Integers, &zmat(&[&[0], &[-4], &[6]]));
    }

    #[test]
    fn polynomial_instance() {
        let f = GfPoly::new(3).unwrap();
        let a = Mat::from_rows(
            vec![vec![f.poly(&[0, 1]), f.poly(&[1])], vec![f.poly(&[0, 0, 1]), f.poly(&[0, 1])]],
            2,
        )
        .unwrap();
        let s = check(&f, &a);
        // det = x^2 - x^2 = 0, gcd of entries = 1
        assert_eq!(s.factors, vec![f.one()]);
    }

    #[test]
    fn solve_examples() {
        let z = Integers;
        let b = vec![BigInt::from(3), BigInt::from(-7)];
        assert_eq!(solve_linear(&z, &Mat::identity(&z, 2), &b).unwrap(), Some(b));
        assert_eq!(solve_linear(&z, &zmat(&[&[2]]), &[BigInt::from(3)]).unwrap(), None);
        let x = solve_linear(&z, &zmat(&[&[1, 2]]), &[BigInt::from(5)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1] * 2, BigInt::from(5));
        assert!(matches!(
            solve_linear(&z, &zmat(&[&[1, 2]]), &[BigInt::from(5), BigInt::from(1)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn kernel_examples() {
        let z = Integers;
        assert_eq!(kernel_basis(&z, &Mat::zeros(&z, 2, 3)).cols(), 3);
        assert_eq!(kernel_basis(&z, &zmat(&[&[2, 0], &[0, 3]])).cols(), 0);
        let k = kernel_basis(&z, &zmat(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert_eq!(&v[0] + &v[1], BigInt::from(0));
        assert_eq!(v[0].magnitude(), &num_bigint::BigUint::from(1u8));
    }

    #[test]
    fn cokernel_examples() {
        let z = Integers;
        let c = cokernel_invariants(&z, &Mat::identity(&z, 3));
        assert!(c.factors.is_empty());
        assert_eq!(c.free_rank, 0);
        let c = cokernel_invariants(&z, &zmat(&[&[2, 0], &[0, 4]]));
        assert_eq!(c.factors, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(c.free_rank, 0);
        let c = cokernel_invariants(&z, &Mat::zeros(&z, 3, 2));
        assert_eq!((c.factors.len(), c.free_rank), (0, 3));
    }
}
