//! The Im Tr duality between `u` and `b⁺`, the quotient `L₁/u₁`, and the
//! coadjoint actions on it.
//!
//! A class `[x]` acts on `u` by `b ↦ Im Tr(x b)`. Two members of the same class
//! differ by a skew-Hermitian `s`, and `Im Tr(s b) = 0` for skew `b`, so the
//! functional only sees the Hermitian part. Classes are therefore stored by
//! the canonical representative `½(x + x*)` and [`eval_class`] pairs that
//! representative directly: `Im Tr(x b) = Im Tr(½(x + x*) b)`.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, MatrixJson, SkewHermitian, UnitaryElement, I, ONE};
use crate::residual::{max_magnitude, Identity, ResidualRecord};
use crate::svd::svd_values;
use crate::truncation::{half_diagonal_upper, in_b_plus, BasisWindow};

/// `Im Tr(a b)` for `a ∈ u`.
pub fn im_trace_pair(a: &SkewHermitian, b: &ComplexMatrix) -> Result<f64> {
    Ok(a.matrix().trace_product(b)?.im)
}

/// Element of `L₁/u₁`, held as its Hermitian representative.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientClass {
    rep: ComplexMatrix,
}

impl QuotientClass {
    pub fn zero(dim: usize) -> Self {
        Self {
            rep: ComplexMatrix::zeros(dim),
        }
    }

    /// Wraps a matrix already known to be Hermitian.
    pub fn from_hermitian_unchecked(rep: ComplexMatrix) -> Self {
        Self { rep }
    }

    pub fn rep(&self) -> &ComplexMatrix {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn to_json(&self) -> MatrixJson {
        self.rep.to_json().with_hermitian_flag()
    }
}

/// `[x] ↦ ½(x + x*)`.
pub fn class_of(x: &ComplexMatrix) -> QuotientClass {
    QuotientClass {
        rep: x.hermitian_part(),
    }
}

/// The functional `b ↦ Im Tr(x b)` of the class, evaluated at `b ∈ u`.
pub fn eval_class(c: &QuotientClass, b: &SkewHermitian) -> Result<f64> {
    Ok(c.rep.trace_product(b.matrix())?.im)
}

/// `Ad*_g [a] = [g⁻¹ a g]`. This is a right action:
/// `Ad*_{gh} = Ad*_h ∘ Ad*_g`.
pub fn coadjoint_group(g: &UnitaryElement, c: &QuotientClass) -> Result<QuotientClass> {
    let conj = c.rep.conjugate_by(g)?;
    Ok(QuotientClass {
        rep: conj.hermitian_part(),
    })
}

/// `ad*_A B = −(T₊₊ + ½T₀)([A, B] + [A, B]*)` for `B ∈ b⁺`.
///
/// As functionals on `u`, `Im Tr(C · ad*_A B) = Im Tr([A, C] B)`.
pub fn coadjoint_algebra_bplus(a: &SkewHermitian, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matrix().check_same_dim(b)?;
    if !in_b_plus(b) {
        return Err(Error::NotInBPlus);
    }
    let w = BasisWindow::for_dim(b.dim())?;
    let comm = a.matrix().commutator(b)?;
    let sym = &comm + &comm.adjoint();
    Ok(-&half_diagonal_upper(&sym, &w)?)
}

/// Residual of `Im Tr([A, C] B) = Im Tr(C · ad*_A B)`.
pub fn coadjoint_duality_residual(
    a: &SkewHermitian,
    b: &ComplexMatrix,
    c: &SkewHermitian,
) -> Result<ResidualRecord> {
    let adb = coadjoint_algebra_bplus(a, b)?;
    let ac = SkewHermitian::new_unchecked(a.matrix().commutator(c.matrix())?);
    let lhs = im_trace_pair(&ac, b)?;
    let rhs = im_trace_pair(c, &adb)?;
    Ok(ResidualRecord::new(
        Identity::CoadjointDuality,
        b.dim(),
        lhs - rhs,
        max_magnitude(&[lhs, rhs]),
    ))
}

/// Gram matrix of [`im_trace_pair`] between fixed real bases of `u(n)` and
/// `b⁺(n)`.
#[derive(Clone, Debug)]
pub struct PairingGram {
    pub n: usize,
    /// Row `i` pairs the `i`-th basis element of `u(n)` with every `b⁺` element.
    pub matrix: Vec<Vec<f64>>,
    pub smallest_singular_value: f64,
}

/// Off-diagonal index pairs `(m, n)` with `m > n`, lexicographic.
fn lower_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(|m| (0..m).map(move |k| (m, k)))
}

/// Real basis of `u(n)`: `iE_kk`, then per pair `(m, k)`, `m > k`:
/// `E_km − E_mk` and `i(E_km + E_mk)`.
pub fn u_basis(n: usize) -> Vec<SkewHermitian> {
    let mut basis: Vec<SkewHermitian> = (0..n)
        .map(|k| SkewHermitian::new_unchecked(ComplexMatrix::unit(n, k, k).scale(I)))
        .collect();
    for (m, k) in lower_pairs(n) {
        let ekm = ComplexMatrix::unit(n, k, m);
        let emk = ComplexMatrix::unit(n, m, k);
        basis.push(SkewHermitian::new_unchecked(&ekm - &emk));
        basis.push(SkewHermitian::new_unchecked((&ekm + &emk).scale(I)));
    }
    basis
}

/// Real basis of `b⁺(n)`: `E_kk`, then per pair `(m, k)`, `m > k`: `E_mk`, `iE_mk`.
pub fn b_plus_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut basis: Vec<ComplexMatrix> = (0..n).map(|k| ComplexMatrix::unit(n, k, k)).collect();
    for (m, k) in lower_pairs(n) {
        let emk = ComplexMatrix::unit(n, m, k);
        basis.push(emk.scale(ONE));
        basis.push(emk.scale(I));
    }
    basis
}

pub fn pairing_gram(n: usize) -> Result<PairingGram> {
    if n == 0 {
        return Err(Error::InvalidConfig("pairing_gram needs n ≥ 1".into()));
    }
    let us = u_basis(n);
    let bs = b_plus_basis(n);
    let matrix: Vec<Vec<f64>> = us
        .iter()
        .map(|u| {
            bs.iter()
                .map(|b| im_trace_pair(u, b))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let size = matrix.len();
    let as_complex = ComplexMatrix::from_fn(size, |r, c| matrix[r][c] * ONE);
    let sv = svd_values(&as_complex)?;
    Ok(PairingGram {
        n,
        matrix,
        smallest_singular_value: *sv.last().expect("non-empty basis"),
    })
}
