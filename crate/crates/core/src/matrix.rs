//! Dense complex square matrices and the two validated wrappers used for
//! elements of the unitary group and its Lie algebra.
//!
//! At fixed finite dimension the bounded, trace-class and Hilbert–Schmidt
//! operators all coincide; they differ only in which Schatten norm is applied
//! (see [`crate::svd::schatten_norm`]).

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::svd::{schatten_norm, Schatten};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense `dim × dim` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Matrix unit with a single 1 at storage position `(row, col)`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(row, col)] = ONE;
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    /// Builds a matrix from row vectors, rejecting ragged or non-finite input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Malformed(format!(
                    "row {r} has length {} but the matrix has {dim} rows",
                    row.len()
                )));
            }
            data.extend(row);
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn check_finite(&self) -> Result<()> {
        match self
            .data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            Some(k) => Err(Error::NonFinite {
                row: k / self.dim,
                col: k % self.dim,
            }),
            None => Ok(()),
        }
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Checked product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// `ab - ba`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(&self.mul_unchecked(rhs) - &rhs.mul_unchecked(self))
    }

    /// `Tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Result<Complex64> {
        self.check_same_dim(rhs)?;
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * rhs.data[k * n + i];
            }
        }
        Ok(acc)
    }

    /// `g* · self · g`, i.e. `g⁻¹ x g` for unitary `g`.
    pub fn conjugate_by(&self, g: &UnitaryElement) -> Result<Self> {
        let gm = g.matrix();
        self.check_same_dim(gm)?;
        Ok(gm.adjoint().mul_unchecked(&self.mul_unchecked(gm)))
    }

    /// `g · self · g*`.
    pub fn conjugate_inverse_by(&self, g: &UnitaryElement) -> Result<Self> {
        let gm = g.matrix();
        self.check_same_dim(gm)?;
        Ok(gm.mul_unchecked(&self.mul_unchecked(&gm.adjoint())))
    }

    /// Hermitian part `½(x + x*)`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// Skew-Hermitian part `½(x − x*)`.
    pub fn skew_part(&self) -> Self {
        (self - &self.adjoint()).scale_real(0.5)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Copies `block` into the square sub-block starting at storage `(offset, offset')`.
    pub fn embed(dim: usize, block: &Self, row_offset: usize, col_offset: usize) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..block.dim {
            for c in 0..block.dim {
                m[(row_offset + r, col_offset + c)] = block[(r, c)];
            }
        }
        m
    }

    /// Extracts the `size × size` sub-block starting at the given storage offsets.
    pub fn block(&self, row_offset: usize, col_offset: usize, size: usize) -> Self {
        Self::from_fn(size, |r, c| self[(row_offset + r, col_offset + c)])
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self - &self.adjoint()).max_abs() <= tol
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:>+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator impls panic on dimension mismatch; the checked paths are
// `matmul`, `commutator` and friends.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add_assign");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub_assign");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

/// Free-function form of [`ComplexMatrix::adjoint`].
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.commutator(b)
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.trace()
}

/// Operator norm of `defect`, short-circuiting through the Frobenius bound
/// when that is already below `tol`.
fn op_norm_exceeds(defect: &ComplexMatrix, tol: f64) -> Option<f64> {
    let fro = defect.frobenius_norm();
    if fro <= tol {
        return None;
    }
    let op = schatten_norm(defect, Schatten::Inf);
    (op > tol).then_some(op)
}

/// Element of the Lie algebra u(n).
#[derive(Clone, Debug, PartialEq)]
pub struct SkewHermitian(ComplexMatrix);

impl SkewHermitian {
    pub const RELATIVE_TOLERANCE: f64 = 1e-12;

    /// Validates `‖X + X*‖_op ≤ 10⁻¹² ‖X‖_op`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.check_finite()?;
        let defect = &matrix + &matrix.adjoint();
        if defect.max_abs() == 0.0 {
            return Ok(Self(matrix));
        }
        let tol = Self::RELATIVE_TOLERANCE * schatten_norm(&matrix, Schatten::Inf);
        match op_norm_exceeds(&defect, tol) {
            Some(defect) => Err(Error::NotSkewHermitian {
                defect,
                tolerance: tol,
            }),
            None => Ok(Self(matrix)),
        }
    }

    pub fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }

    /// Skew-Hermitian part of an arbitrary matrix; exact by construction.
    pub fn project(matrix: &ComplexMatrix) -> Self {
        Self(matrix.skew_part())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_real(s))
    }
}

/// Element of the unitary group U(n).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryElement(ComplexMatrix);

impl UnitaryElement {
    pub const TOLERANCE_PER_DIM: f64 = 1e-12;

    /// Validates `‖U*U − I‖_op ≤ 10⁻¹² · dim`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.check_finite()?;
        let defect = unitarity_defect_matrix(&matrix);
        let tol = Self::TOLERANCE_PER_DIM * matrix.dim() as f64;
        match op_norm_exceeds(&defect, tol) {
            Some(defect) => Err(Error::NotUnitary {
                defect,
                tolerance: tol,
            }),
            None => Ok(Self(matrix)),
        }
    }

    pub fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Group product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        Ok(Self(self.0.matmul(&rhs.0)?))
    }

    /// `‖U*U − I‖_op`.
    pub fn unitarity_defect(&self) -> f64 {
        schatten_norm(&unitarity_defect_matrix(&self.0), Schatten::Inf)
    }
}

fn unitarity_defect_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    &(&m.adjoint() * m) - &ComplexMatrix::identity(m.dim())
}

/// Matrix interchange format: `{"dim": n, "re": [[...]], "im": [[...]]}`,
/// row-major, with optional ℤ-index labels and a Hermitian flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<bool>,
}

impl MatrixJson {
    pub fn with_indices(mut self, indices: Vec<i64>) -> Self {
        self.indices = Some(indices);
        self
    }

    pub fn with_hermitian_flag(mut self) -> Self {
        self.hermitian = Some(true);
        self
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.dim || self.im.len() != self.dim {
            return Err(Error::Malformed(format!(
                "declared dim {} but found {} real rows and {} imaginary rows",
                self.dim,
                self.re.len(),
                self.im.len()
            )));
        }
        if let Some(idx) = &self.indices {
            if idx.len() != self.dim {
                return Err(Error::Malformed(format!(
                    "indices has length {} for dim {}",
                    idx.len(),
                    self.dim
                )));
            }
        }
        let rows = self
            .re
            .iter()
            .zip(&self.im)
            .enumerate()
            .map(|(r, (re, im))| {
                if re.len() != self.dim || im.len() != self.dim {
                    return Err(Error::Malformed(format!("row {r} has the wrong length")));
                }
                Ok(re
                    .iter()
                    .zip(im)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect())
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        ComplexMatrix::from_rows(rows)
    }

    pub fn parse(text: &str) -> Result<ComplexMatrix> {
        serde_json::from_str::<MatrixJson>(text)?.to_matrix()
    }
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        Self {
            dim: n,
            re: (0..n)
                .map(|r| m.row(r).iter().map(|z| z.re).collect())
                .collect(),
            im: (0..n)
                .map(|r| m.row(r).iter().map(|z| z.im).collect())
                .collect(),
            indices: None,
            hermitian: None,
        }
    }
}
