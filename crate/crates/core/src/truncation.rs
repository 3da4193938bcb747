//! The ℤ-indexed basis window, triangular truncations, and the splitting
//! `L₂ = u₂ ⊕ b₂⁺`.
//!
//! "Upper triangular" means: entry `(m, n)` is kept iff `m ≥ n` in ℤ-order.
//! Because the window stores labels in ascending order, that is the *lower*
//! triangle of the row-major storage. Every predicate below is phrased in
//! terms of ℤ-labels through [`BasisWindow::label`] so the storage layout never
//! leaks into the definitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, SkewHermitian, ONE, ZERO};
use crate::svd::operator_norm;

/// Symmetric window of basis labels `{−N, …, N−1}`.
///
/// `H₋` is spanned by the labels `−N…−1` (storage `0…N−1`), `H₊` by `0…N−1`
/// (storage `N…2N−1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisWindow {
    #[serde(rename = "N")]
    half_width: usize,
}

impl BasisWindow {
    pub fn new(half_width: usize) -> Result<Self> {
        if half_width == 0 {
            return Err(Error::InvalidConfig(
                "window half-width must be positive".into(),
            ));
        }
        Ok(Self { half_width })
    }

    /// Window whose storage dimension is `dim = 2N`.
    pub fn for_dim(dim: usize) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::OddDimension(dim));
        }
        Ok(Self {
            half_width: dim / 2,
        })
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn dim(&self) -> usize {
        2 * self.half_width
    }

    /// ℤ-label of a storage index.
    pub fn label(&self, storage: usize) -> i64 {
        storage as i64 - self.half_width as i64
    }

    pub fn storage(&self, label: i64) -> Option<usize> {
        let s = label + self.half_width as i64;
        (0..self.dim() as i64).contains(&s).then_some(s as usize)
    }

    pub fn labels(&self) -> Vec<i64> {
        (0..self.dim()).map(|s| self.label(s)).collect()
    }

    /// Storage offset of the `H₋` block.
    pub fn negative_offset(&self) -> usize {
        0
    }

    /// Storage offset of the `H₊` block.
    pub fn positive_offset(&self) -> usize {
        self.half_width
    }

    fn check(&self, a: &ComplexMatrix) -> Result<()> {
        if a.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: a.dim(),
            })
        }
    }

    /// Keeps entries whose ℤ-labels `(m, n)` satisfy `keep(m, n)`.
    fn mask(&self, a: &ComplexMatrix, keep: impl Fn(i64, i64) -> bool) -> Result<ComplexMatrix> {
        self.check(a)?;
        Ok(ComplexMatrix::from_fn(a.dim(), |r, c| {
            if keep(self.label(r), self.label(c)) {
                a[(r, c)]
            } else {
                ZERO
            }
        }))
    }
}

/// `T₊`: keep `m ≥ n`.
pub fn t_plus(a: &ComplexMatrix, w: &BasisWindow) -> Result<ComplexMatrix> {
    w.mask(a, |m, n| m >= n)
}

/// `T₊₊`: keep `m > n`.
pub fn t_plus_plus(a: &ComplexMatrix, w: &BasisWindow) -> Result<ComplexMatrix> {
    w.mask(a, |m, n| m > n)
}

/// `T₀ = T₊ − T₊₊`: keep the diagonal.
pub fn t_zero(a: &ComplexMatrix, w: &BasisWindow) -> Result<ComplexMatrix> {
    w.mask(a, |m, n| m == n)
}

/// `(T₊₊ + ½T₀)(a)`.
pub fn half_diagonal_upper(a: &ComplexMatrix, w: &BasisWindow) -> Result<ComplexMatrix> {
    w.check(a)?;
    Ok(ComplexMatrix::from_fn(a.dim(), |r, c| {
        let (m, n) = (w.label(r), w.label(c));
        if m > n {
            a[(r, c)]
        } else if m == n {
            a[(r, c)] * 0.5
        } else {
            ZERO
        }
    }))
}

/// Projection onto `b₂⁺` along `u₂`: `(T₊₊ + ½T₀)(x + x*)`.
pub fn p_b2(x: &ComplexMatrix, w: &BasisWindow) -> Result<ComplexMatrix> {
    w.check(x)?;
    half_diagonal_upper(&(x + &x.adjoint()), w)
}

/// Projection onto `u₂` along `b₂⁺`: `x − p_b2(x)`.
pub fn p_u2(x: &ComplexMatrix, w: &BasisWindow) -> Result<ComplexMatrix> {
    Ok(x - &p_b2(x, w)?)
}

/// Both halves of the splitting at once.
pub fn split(x: &ComplexMatrix, w: &BasisWindow) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let b = p_b2(x, w)?;
    Ok((x - &b, b))
}

/// `x ∈ b⁺`: vanishes for `m < n` and has a real diagonal, up to
/// `10⁻¹² ‖x‖_op`. Storage order is taken as ℤ-order.
pub fn in_b_plus(x: &ComplexMatrix) -> bool {
    // max|x_ij| ≤ ‖x‖_op, so passing with that scale settles it without an SVD.
    let violation = b_plus_violation(x);
    violation <= 1e-12 * x.max_abs() || violation <= 1e-12 * operator_norm(x)
}

fn b_plus_violation(x: &ComplexMatrix) -> f64 {
    let n = x.dim();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            let z = x[(r, c)];
            worst = worst.max(if r == c { z.im.abs() } else { z.norm() });
        }
    }
    worst
}

/// `x ∈ u`: `‖x + x*‖_op ≤ 10⁻¹² ‖x‖_op`.
pub fn in_u(x: &ComplexMatrix) -> bool {
    let defect = x + &x.adjoint();
    if defect.frobenius_norm() <= 1e-12 * x.max_abs() {
        return true;
    }
    operator_norm(&defect) <= 1e-12 * operator_norm(x)
}

/// Partial isometry `u: H₋ → H₊`, `u|−n⟩ = |n−1⟩` for `n = 1…N`.
pub fn shift_u(w: &BasisWindow) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(w.dim());
    for n in 1..=w.half_width() as i64 {
        let row = w.storage(n - 1).expect("label inside window");
        let col = w.storage(-n).expect("label inside window");
        u[(row, col)] = ONE;
    }
    u
}

/// `A = [[0, u], [−u*, 0]]` in the decomposition `H₊ ⊕ H₋`.
pub fn build_block_a(w: &BasisWindow) -> SkewHermitian {
    let u = shift_u(w);
    SkewHermitian::new_unchecked(&u - &u.adjoint())
}

/// `B = [[0, uK], [0, 0]]` for a Hermitian `K` acting on `H₋` (labels `−N…−1`,
/// ascending).
pub fn build_block_b(k: &ComplexMatrix, w: &BasisWindow) -> Result<ComplexMatrix> {
    if k.dim() != w.half_width() {
        return Err(Error::DimensionMismatch {
            expected: w.half_width(),
            actual: k.dim(),
        });
    }
    let defect = (k - &k.adjoint()).max_abs();
    let tol = 1e-10 * k.max_abs().max(1.0);
    if defect > tol {
        return Err(Error::NotHermitian {
            defect,
            tolerance: tol,
        });
    }
    let embedded = ComplexMatrix::embed(w.dim(), k, w.negative_offset(), w.negative_offset());
    Ok(&shift_u(w) * &embedded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::I;
    use crate::random::{random_skew_hermitian, random_trace_class};
    use crate::svd::trace_norm;

    fn w(n: usize) -> BasisWindow {
        BasisWindow::new(n).unwrap()
    }

    #[test]
    fn window_labels() {
        let win = w(3);
        assert_eq!(win.labels(), vec![-3, -2, -1, 0, 1, 2]);
        assert_eq!(win.storage(-3), Some(0));
        assert_eq!(win.storage(3), None);
        assert!(BasisWindow::for_dim(5).is_err());
        assert_eq!(serde_json::to_string(&win).unwrap(), r#"{"N":3}"#);
    }

    #[test]
    fn truncations_on_two_by_two() {
        // labels −1, 0
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let win = w(1);
        assert_eq!(
            t_plus(&a, &win).unwrap(),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[3.0, 4.0]]).unwrap()
        );
        assert_eq!(
            t_plus_plus(&a, &win).unwrap(),
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[3.0, 0.0]]).unwrap()
        );
        assert_eq!(
            t_zero(&a, &win).unwrap(),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 4.0]]).unwrap()
        );
        assert!(t_plus(&ComplexMatrix::zeros(3), &win).is_err());
    }

    #[test]
    fn truncations_of_identity() {
        let win = w(4);
        let id = ComplexMatrix::identity(8);
        assert_eq!(t_plus(&id, &win).unwrap(), id);
        assert_eq!(t_plus_plus(&id, &win).unwrap(), ComplexMatrix::zeros(8));
    }

    #[test]
    fn truncation_complement_reconstructs() {
        let win = w(8);
        let a = random_trace_class(16, 4, false);
        let upper = t_plus(&a, &win).unwrap();
        // The discarded part is the strictly-upper truncation of the transpose, transposed back.
        let at = ComplexMatrix::from_fn(16, |r, c| a[(c, r)]);
        let strict_of_t = t_plus_plus(&at, &win).unwrap();
        let discarded = ComplexMatrix::from_fn(16, |r, c| strict_of_t[(c, r)]);
        assert_eq!(&upper + &discarded, a);
        assert_eq!(
            &t_plus_plus(&a, &win).unwrap() + &t_zero(&a, &win).unwrap(),
            upper
        );
    }

    #[test]
    fn p_b2_examples() {
        let win = w(1);
        // labels 0,1 in the text are storage 0,1 here; only order matters.
        let ie00 = ComplexMatrix::unit(2, 0, 0).scale(I);
        assert_eq!(p_b2(&ie00, &win).unwrap(), ComplexMatrix::zeros(2));
        let e01 = ComplexMatrix::unit(2, 0, 1);
        let e10 = ComplexMatrix::unit(2, 1, 0);
        assert_eq!(p_b2(&e01, &win).unwrap(), e10);
        assert_eq!(p_u2(&e01, &win).unwrap(), &e01 - &e10);
        assert_eq!(p_u2(&ie00, &win).unwrap(), ie00);
    }

    #[test]
    fn p_b2_fixes_b_plus() {
        let win = w(5);
        let x = random_trace_class(10, 3, false);
        let b = p_b2(&x, &win).unwrap();
        assert!(in_b_plus(&b));
        assert_eq!(p_b2(&b, &win).unwrap(), b);
        let s = random_skew_hermitian(10, 4);
        assert_eq!(p_b2(s.matrix(), &win).unwrap(), ComplexMatrix::zeros(10));
    }

    #[test]
    fn p_u2_idempotent_and_skew() {
        let win = w(6);
        let x = random_trace_class(12, 8, false);
        let u = p_u2(&x, &win).unwrap();
        assert!(in_u(&u));
        assert!((&p_u2(&u, &win).unwrap() - &u).max_abs() <= 1e-12 * u.max_abs());
    }

    #[test]
    fn membership_predicates() {
        let e10 = ComplexMatrix::unit(2, 1, 0);
        assert!(in_b_plus(&e10));
        let ie00 = ComplexMatrix::unit(2, 0, 0).scale(I);
        assert!(in_u(&ie00));
        assert!(!in_b_plus(&ie00));
        assert!(!in_b_plus(&ComplexMatrix::unit(2, 0, 1)));
    }

    #[test]
    fn shift_is_a_partial_isometry() {
        let u1 = shift_u(&w(1));
        assert_eq!(u1, ComplexMatrix::unit(2, 1, 0));
        let win = w(2);
        let u2 = shift_u(&win);
        // labels (0, −1) and (1, −2)
        let mut expected = ComplexMatrix::zeros(4);
        expected[(win.storage(0).unwrap(), win.storage(-1).unwrap())] = ONE;
        expected[(win.storage(1).unwrap(), win.storage(-2).unwrap())] = ONE;
        assert_eq!(u2, expected);
        for n in 1..6 {
            let u = shift_u(&w(n));
            let sum = &(&u.adjoint() * &u) + &(&u * &u.adjoint());
            assert_eq!(sum, ComplexMatrix::identity(2 * n));
        }
    }

    #[test]
    fn block_operators() {
        let win = w(1);
        let b0 = build_block_b(&ComplexMatrix::zeros(1), &win).unwrap();
        assert_eq!(b0, ComplexMatrix::zeros(2));
        let b1 = build_block_b(&ComplexMatrix::identity(1), &win).unwrap();
        assert_eq!(
            b1,
            ComplexMatrix::unit(2, win.storage(0).unwrap(), win.storage(-1).unwrap())
        );
        assert!((trace_norm(&b1) - 1.0).abs() < 1e-15);

        let a = build_block_a(&w(4));
        assert!(in_u(a.matrix()));
        assert!((operator_norm(a.matrix()) - 1.0).abs() < 1e-14);

        let not_hermitian = ComplexMatrix::unit(2, 0, 1);
        assert!(matches!(
            build_block_b(&not_hermitian, &w(2)),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn block_commutator_is_block_diagonal() {
        let n = 3;
        let win = w(n);
        let k = random_trace_class(n, 2, false).hermitian_part();
        let a = build_block_a(&win);
        let b = build_block_b(&k, &win).unwrap();
        assert!(in_b_plus(&b));
        let comm = a.matrix().commutator(&b).unwrap();
        let u = shift_u(&win);
        let kk = ComplexMatrix::embed(2 * n, &k, 0, 0);
        let expected = &(&(&u * &kk) * &u.adjoint()) - &kk;
        assert!((&comm - &expected).max_abs() < 1e-14);
        assert!((trace_norm(&b) - trace_norm(&k)).abs() < 1e-12);
    }

    mod prop {
        use super::*;
        use crate::random::random_trace_class;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn split_is_a_projection_pair(half in 1usize..6, seed in any::<u64>()) {
                let w = BasisWindow::new(half).unwrap();
                let x = random_trace_class(w.dim(), seed, false);
                let (u, b) = split(&x, &w).unwrap();
                prop_assert!(in_u(&u));
                prop_assert!(in_b_plus(&b));
                let bb = p_b2(&b, &w).unwrap();
                prop_assert!((&bb - &b).max_abs() <= 1e-14 * b.max_abs());
                let uu = p_u2(&u, &w).unwrap();
                prop_assert!((&uu - &u).max_abs() <= 1e-14 * u.max_abs());
            }

            #[test]
            fn truncations_partition_entries(half in 1usize..6, seed in any::<u64>()) {
                let w = BasisWindow::new(half).unwrap();
                let x = random_trace_class(w.dim(), seed, false);
                let strict_lower = &x - &t_plus(&x, &w).unwrap();
                let sum = &(&t_plus_plus(&x, &w).unwrap() + &t_zero(&x, &w).unwrap()) + &strict_lower;
                prop_assert_eq!(sum, x);
            }
        }
    }
}
