//! Matrix equations `Σ L_t Z R_t ≡ T (mod columns of Rel)` in an unknown
//! matrix `Z`, flattened to one linear system by Kronecker products.

use crate::error::{Error, Result};
use crate::linalg::{kronecker, mat_neg, EuclideanDomain, LinearSolver, Mat};

/// One block of equations: `Σ left·Z·right - target` has every column in
/// the span of `modulus`.
#[derive(Clone, Debug)]
pub struct Constraint<E> {
    pub terms: Vec<(Mat<E>, Mat<E>)>,
    pub target: Mat<E>,
    pub modulus: Mat<E>,
}

impl<E: Clone> Constraint<E> {
    pub fn single(left: Mat<E>, right: Mat<E>, target: Mat<E>, modulus: Mat<E>) -> Self {
        Constraint { terms: vec![(left, right)], target, modulus }
    }
}

#[derive(Clone, Debug)]
pub struct MatrixEquation<E> {
    pub rows: usize,
    pub cols: usize,
    pub constraints: Vec<Constraint<E>>,
}

fn vectorize<E: Clone>(m: &Mat<E>) -> Vec<E> {
    (0..m.cols()).flat_map(|j| m.column(j)).collect()
}

impl<E: Clone> MatrixEquation<E> {
    pub fn new(rows: usize, cols: usize) -> Self {
        MatrixEquation { rows, cols, constraints: Vec::new() }
    }

    pub fn push(&mut self, c: Constraint<E>) -> &mut Self {
        self.constraints.push(c);
        self
    }

    /// Some solution `Z`, or `None` if the system has none over the ring.
    pub fn solve<R: EuclideanDomain<Elem = E>>(&self, ring: &R) -> Result<Option<Mat<E>>> {
        let unknowns = self.rows * self.cols;
        let mut blocks_rows = 0;
        let mut slack = 0;
        for c in &self.constraints {
            let (p, q) = (c.target.rows(), c.target.cols());
            if c.modulus.rows() != p {
                return Err(Error::DimensionMismatch("modulus rows differ from target rows".into()));
            }
            for (l, r) in &c.terms {
                if l.rows() != p || l.cols() != self.rows || r.rows() != self.cols || r.cols() != q {
                    return Err(Error::DimensionMismatch("constraint term has the wrong shape".into()));
                }
            }
            blocks_rows += p * q;
            slack += c.modulus.cols() * q;
        }
        let mut big = Mat::zeros(ring, blocks_rows, unknowns + slack);
        let mut rhs = Vec::with_capacity(blocks_rows);
        let (mut r0, mut s0) = (0, unknowns);
        for c in &self.constraints {
            let (p, q) = (c.target.rows(), c.target.cols());
            let mut coef = Mat::zeros(ring, p * q, unknowns);
            for (l, r) in &c.terms {
                coef = crate::linalg::mat_add(ring, &coef, &kronecker(ring, &r.transpose(), l))?;
            }
            big.set_block(r0, 0, &coef);
            let slack_block = mat_neg(ring, &kronecker(ring, &Mat::identity(ring, q), &c.modulus));
            big.set_block(r0, s0, &slack_block);
            rhs.extend(vectorize(&c.target));
            r0 += p * q;
            s0 += c.modulus.cols() * q;
        }
        let Some(x) = LinearSolver::new(ring, &big).solve(&rhs)? else {
            return Ok(None);
        };
        Ok(Some(Mat::from_fn(self.rows, self.cols, |i, j| x[j * self.rows + i].clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_mul, Integers};
    use num_bigint::BigInt;

    fn zm(rows: &[&[i64]]) -> Mat<BigInt> {
        let c = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), c).unwrap()
    }

    #[test]
    fn left_inverse_exists_only_for_split_columns() {
        let r = Integers;
        // Z·[1;2] has a retraction, Z·[2;4] does not
        let split = zm(&[&[1], &[2]]);
        let mut eq = MatrixEquation::new(1, 2);
        eq.push(Constraint::single(zm(&[&[1]]), split.clone(), zm(&[&[1]]), Mat::zeros(&r, 1, 0)));
        let z = eq.solve(&r).unwrap().unwrap();
        assert_eq!(mat_mul(&r, &z, &split).unwrap(), zm(&[&[1]]));

        let mut eq = MatrixEquation::new(1, 2);
        eq.push(Constraint::single(zm(&[&[1]]), zm(&[&[2], &[4]]), zm(&[&[1]]), Mat::zeros(&r, 1, 0)));
        assert!(eq.solve(&r).unwrap().is_none());
    }

    #[test]
    fn modulus_allows_congruences() {
        let r = Integers;
        // 2 z ≡ 1 (mod 5)
        let mut eq = MatrixEquation::new(1, 1);
        eq.push(Constraint::single(zm(&[&[2]]), zm(&[&[1]]), zm(&[&[1]]), zm(&[&[5]])));
        let z = eq.solve(&r).unwrap().unwrap();
        assert_eq!((z.at(0, 0) * 2 - 1) % 5, BigInt::from(0));
    }
}
