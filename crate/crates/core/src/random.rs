//! Seeded generators for test inputs. Every generator is a pure function of
//! `(dim, seed)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::expm::exp_skew;
use crate::matrix::{ComplexMatrix, SkewHermitian, UnitaryElement};
use crate::svd::trace_norm;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `(G − G*)/2` for Gaussian `G`; skew-Hermitian exactly.
pub fn random_skew_hermitian(dim: usize, seed: u64) -> SkewHermitian {
    let g = gaussian_matrix(dim, &mut rng_from_seed(seed));
    SkewHermitian::project(&g)
}

/// `exp(X)` of a random skew-Hermitian `X`.
pub fn random_unitary(dim: usize, seed: u64) -> UnitaryElement {
    exp_skew(&random_skew_hermitian(dim, seed))
        .expect("eigensolver failed on a well-conditioned random Hermitian matrix")
}

/// Random stand-in for a trace-class operator; with `unit_trace_norm` it is
/// rescaled so that `‖a‖₁ = 1`.
pub fn random_trace_class(dim: usize, seed: u64, unit_trace_norm: bool) -> ComplexMatrix {
    let a = gaussian_matrix(dim, &mut rng_from_seed(seed));
    if unit_trace_norm {
        let n1 = trace_norm(&a);
        a.scale_real(1.0 / n1)
    } else {
        a
    }
}
