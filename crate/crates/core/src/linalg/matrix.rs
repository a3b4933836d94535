//! Dense matrices over a Euclidean domain.

use serde::ser::{Serialize, SerializeSeq, Serializer};

use super::ring::EuclideanDomain;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Mat { rows: r, cols, data })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<E>]) -> Self {
        Mat::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Mat::from_fn(self.rows, idx.len(), |i, j| self.at(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Mat::from_fn(idx.len(), self.cols, |i, j| self.at(idx[i], j).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hcat of {} and {} rows",
                self.rows, other.rows
            )));
        }
        Ok(Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        }))
    }

    /// `[self ; other]`.
    pub fn vcat(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vcat of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Mat { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn entries(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<E: Clone> Mat<E> {
    pub fn zeros<R: EuclideanDomain<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        let z = ring.zero();
        Mat { rows, cols, data: vec![z; rows * cols] }
    }

    pub fn identity<R: EuclideanDomain<Elem = E>>(ring: &R, n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn diagonal<R: EuclideanDomain<Elem = E>>(ring: &R, diag: &[E]) -> Self {
        let n = diag.len();
        Mat::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { ring.zero() })
    }

    /// Block-diagonal matrix.
    pub fn block_diagonal<R: EuclideanDomain<Elem = E>>(ring: &R, blocks: &[Mat<E>]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.at(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat<E>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.at(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |i, j| self.at(r0 + i, c0 + j).clone())
    }
}

/// Ring-aware arithmetic on matrices and vectors.
pub fn mat_mul<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Result<Mat<R::Elem>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "product of {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Mat::zeros(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.at(i, k);
            if ring.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.at(k, j);
                if ring.is_zero(bkj) {
                    continue;
                }
                let v = ring.add(out.at(i, j), &ring.mul(aik, bkj));
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

pub fn mat_vec<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
    if a.cols != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix applied to vector of length {}",
            a.rows,
            a.cols,
            v.len()
        )));
    }
    Ok((0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(v)
                .fold(ring.zero(), |acc, (x, y)| {
                    if ring.is_zero(x) || ring.is_zero(y) {
                        acc
                    } else {
                        ring.add(&acc, &ring.mul(x, y))
                    }
                })
        })
        .collect())
}

pub fn mat_add<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Result<Mat<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::DimensionMismatch("matrix sum".into()));
    }
    Ok(Mat::from_fn(a.rows, a.cols, |i, j| ring.add(a.at(i, j), b.at(i, j))))
}

pub fn mat_neg<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    Mat::from_fn(a.rows, a.cols, |i, j| ring.neg(a.at(i, j)))
}

pub fn mat_scale<R: EuclideanDomain>(ring: &R, c: &R::Elem, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    Mat::from_fn(a.rows, a.cols, |i, j| ring.mul(c, a.at(i, j)))
}

pub fn vec_add<R: EuclideanDomain>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

pub fn vec_sub<R: EuclideanDomain>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()
}

pub fn vec_scale<R: EuclideanDomain>(ring: &R, c: &R::Elem, a: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().map(|x| ring.mul(c, x)).collect()
}

pub fn is_zero_vec<R: EuclideanDomain>(ring: &R, v: &[R::Elem]) -> bool {
    v.iter().all(|x| ring.is_zero(x))
}

/// Kronecker product `a ⊗ b`.
pub fn kronecker<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    Mat::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        ring.mul(a.at(i / b.rows, j / b.cols), b.at(i % b.rows, j % b.cols))
    })
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant<R: EuclideanDomain>(ring: &R, a: &Mat<R::Elem>) -> Result<R::Elem> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(ring.one());
    }
    let mut m = a.clone();
    let mut sign_flip = false;
    let mut prev = ring.one();
    for k in 0..n {
        if ring.is_zero(m.at(k, k)) {
            match (k + 1..n).find(|&i| !ring.is_zero(m.at(i, k))) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign_flip = !sign_flip;
                }
                None => return Ok(ring.zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(
                    &ring.mul(m.at(k, k), m.at(i, j)),
                    &ring.mul(m.at(i, k), m.at(k, j)),
                );
                let v = ring.div_exact(&num, &prev).expect("Bareiss division is exact");
                m.set(i, j, v);
            }
            m.set(i, k, ring.zero());
        }
        prev = m.at(k, k).clone();
    }
    let det = m.at(n - 1, n - 1).clone();
    Ok(if sign_flip { ring.neg(&det) } else { det })
}

impl<E: std::fmt::Display> Serialize for Mat<E> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|e| e.to_string())
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}
