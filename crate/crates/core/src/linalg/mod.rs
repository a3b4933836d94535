//! Exact linear algebra over computable Euclidean domains.

pub mod hermite;
pub mod matrix;
pub mod ring;
pub mod snf;

pub use hermite::hermite;
pub use matrix::{determinant, kronecker, mat_add, mat_mul, mat_neg, mat_scale, mat_vec, Mat};
pub use ring::{EuclideanDomain, GfPoly, Integers, Poly, RingTag};
pub use snf::{cokernel_invariants, kernel_basis, rank, snf, solve_linear, CokernelInvariants, LinearSolver, SnfDecomposition};
