//! Exponential map u(n) → U(n).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, SkewHermitian, UnitaryElement, I};

const EIGEN_MAX_ITER: usize = 10_000;

/// Eigendecomposition `h = V diag(λ) V*` of a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.dim();
    let m = DMatrix::from_fn(n, n, |r, c| h[(r, c)]);
    let eig =
        SymmetricEigen::try_new(m, f64::EPSILON, EIGEN_MAX_ITER).ok_or(Error::NoConvergence {
            routine: "Hermitian eigensolver",
            iterations: EIGEN_MAX_ITER,
        })?;
    let vecs = ComplexMatrix::from_fn(n, |r, c| eig.eigenvectors[(r, c)]);
    Ok((eig.eigenvalues.iter().copied().collect(), vecs))
}

/// `exp(x)` for skew-Hermitian `x = iH`, computed as `V e^{iΛ} V*` from the
/// eigendecomposition of `H = −ix`.
pub fn exp_skew(x: &SkewHermitian) -> Result<UnitaryElement> {
    let n = x.dim();
    // Symmetrize so the eigensolver sees an exactly Hermitian input.
    let h = x.matrix().scale(-I).hermitian_part();
    let (lambda, v) = hermitian_eigen(&h)?;
    let phases: Vec<Complex64> = lambda
        .iter()
        .map(|&l| Complex64::from_polar(1.0, l))
        .collect();
    let vd = ComplexMatrix::from_fn(n, |r, c| v[(r, c)] * phases[c]);
    Ok(UnitaryElement::new_unchecked(&vd * &v.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ONE, ZERO};
    use crate::random::random_skew_hermitian;
    use crate::svd::operator_norm;
    use std::f64::consts::PI;

    #[test]
    fn exp_of_zero_is_identity() {
        let g = exp_skew(&SkewHermitian::zeros(4)).unwrap();
        assert!((g.matrix() - &ComplexMatrix::identity(4)).max_abs() < 1e-15);
    }

    #[test]
    fn diagonal_exponential() {
        let x = SkewHermitian::new(ComplexMatrix::from_diagonal(&[I * PI, ZERO])).unwrap();
        let g = exp_skew(&x).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[-ONE, ONE]);
        assert!((g.matrix() - &expected).max_abs() < 1e-14);
    }

    #[test]
    fn semigroup_and_unitarity() {
        for seed in 0..10 {
            let x = random_skew_hermitian(8, seed);
            let x = x.scale(1.0 / operator_norm(x.matrix()));
            let full = exp_skew(&x).unwrap();
            let half = exp_skew(&x.scale(0.5)).unwrap();
            let twice = half.compose(&half).unwrap();
            assert!(operator_norm(&(twice.matrix() - full.matrix())) <= 1e-10);
        }
        for seed in 0..5 {
            let x = random_skew_hermitian(12, 100 + seed);
            let x = x.scale(10.0 / operator_norm(x.matrix()));
            let g = exp_skew(&x).unwrap();
            assert!(g.unitarity_defect() <= 1e-12, "{}", g.unitarity_defect());
        }
    }
}
