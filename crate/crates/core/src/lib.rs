//! Finite-dimensional laboratory for the Banach Poisson–Lie group structure
//! of the unitary group.
//!
//! Operators on a ℤ-indexed Hilbert space are truncated to the symmetric
//! window `{−N, …, N−1}` and every algebraic identity of the construction is
//! evaluated numerically: the Im Tr duality between `u` and the triangular
//! algebra `b⁺`, the quotient `L₁/u₁` and its coadjoint actions, the Poisson
//! tensor `Π_r` with its cocycle and Jacobi identities, and the induced Lie
//! bracket on the quotient. [`growth`] measures how the triangular truncation
//! and the coadjoint action on `b⁺` blow up in trace norm as `N` grows.

pub mod error;
pub mod expm;
pub mod growth;
pub mod matrix;
pub mod pairing;
pub mod poisson;
pub mod random;
pub mod report;
pub mod residual;
pub mod svd;
pub mod truncation;

pub use error::{Error, Result};
pub use expm::exp_skew;
pub use matrix::{ComplexMatrix, MatrixJson, SkewHermitian, UnitaryElement};
pub use pairing::QuotientClass;
pub use svd::{schatten_norm, svd_values, Schatten};
pub use truncation::BasisWindow;
