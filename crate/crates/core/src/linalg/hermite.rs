//! Row-style Hermite normal form: `W·A = H` with `W` unimodular.

use super::matrix::Mat;
use super::ring::EuclideanDomain;

fn row_axpy<R: EuclideanDomain>(ring: &R, m: &mut Mat<R::Elem>, target: usize, q: &R::Elem, source: usize) {
    for c in 0..m.cols() {
        let v = ring.sub(m.at(target, c), &ring.mul(q, m.at(source, c)));
        m.set(target, c, v);
    }
}

fn col_axpy<R: EuclideanDomain>(ring: &R, m: &mut Mat<R::Elem>, target: usize, q: &R::Elem, source: usize) {
    for r in 0..m.rows() {
        let v = ring.add(m.at(r, target), &ring.mul(q, m.at(r, source)));
        m.set(r, target, v);
    }
}

fn col_scale<R: EuclideanDomain>(ring: &R, m: &mut Mat<R::Elem>, col: usize, u: &R::Elem) {
    for r in 0..m.rows() {
        let v = ring.mul(u, m.at(r, col));
        m.set(r, col, v);
    }
}

fn row_scale<R: EuclideanDomain>(ring: &R, m: &mut Mat<R::Elem>, row: usize, u: &R::Elem) {
    for c in 0..m.cols() {
        let v = ring.mul(u, m.at(row, c));
        m.set(row, c, v);
    }
}

/// Returns `(W, W⁻¹, H)`. Pivots are canonical associates and entries above a
/// pivot are reduced modulo it, so `H` depends only on the row space of `A`.
pub fn hermite<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>) -> (Mat<R::Elem>, Mat<R::Elem>, Mat<R::Elem>) {
    let mut h = a.clone();
    let mut w = Mat::identity(ring, a.rows());
    let mut w_inv = w.clone();
    let mut pr = 0;
    for c in 0..a.cols() {
        if pr == a.rows() {
            break;
        }
        loop {
            let pivot = (pr..h.rows())
                .filter(|&i| !ring.is_zero(h.at(i, c)))
                .min_by_key(|&i| ring.size(h.at(i, c)));
            let Some(p) = pivot else { break };
            h.swap_rows(pr, p);
            w.swap_rows(pr, p);
            w_inv.swap_cols(pr, p);
            let mut clean = true;
            for i in pr + 1..h.rows() {
                if ring.is_zero(h.at(i, c)) {
                    continue;
                }
                let (q, r) = ring.div_rem(h.at(i, c), h.at(pr, c));
                row_axpy(ring, &mut h, i, &q, pr);
                row_axpy(ring, &mut w, i, &q, pr);
                col_axpy(ring, &mut w_inv, pr, &q, i);
                clean &= ring.is_zero(&r);
            }
            if clean {
                break;
            }
        }
        if ring.is_zero(h.at(pr, c)) {
            continue;
        }
        let (unit, _) = ring.normalize(h.at(pr, c));
        let inv = ring.unit_inverse(&unit).expect("normalize returns a unit");
        row_scale(ring, &mut h, pr, &inv);
        row_scale(ring, &mut w, pr, &inv);
        col_scale(ring, &mut w_inv, pr, &unit);
        for i in 0..pr {
            let q = ring.div_rem(h.at(i, c), h.at(pr, c)).0;
            row_axpy(ring, &mut h, i, &q, pr);
            row_axpy(ring, &mut w, i, &q, pr);
            col_axpy(ring, &mut w_inv, pr, &q, i);
        }
        pr += 1;
    }
    (w, w_inv, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{determinant, mat_mul, Integers};
    use num_bigint::BigInt;

    #[test]
    fn small_integer_matrices() {
        let r = Integers;
        let a = Mat::from_rows(vec![vec![4, 6], vec![2, 3], vec![-6, 1]].into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect(), 2).unwrap();
        let (w, w_inv, h) = hermite(&r, &a);
        assert_eq!(mat_mul(&r, &w, &w_inv).unwrap(), Mat::identity(&r, 3));
        assert_eq!(mat_mul(&r, &w, &a).unwrap(), h);
        let d = determinant(&r, &w).unwrap();
        assert!(d == BigInt::from(1) || d == BigInt::from(-1));
        assert_eq!(h.at(1, 0), &BigInt::from(0));
        assert_eq!(h.at(2, 0), &BigInt::from(0));
        assert_eq!(h.at(2, 1), &BigInt::from(0));
        let minus_two = Mat::from_rows(vec![vec![BigInt::from(-2)]], 1).unwrap();
        assert_eq!(hermite(&r, &minus_two).2.at(0, 0), &BigInt::from(2));
    }
}
