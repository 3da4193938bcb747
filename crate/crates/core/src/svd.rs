//! Singular values by one-sided (Hestenes) Jacobi and the Schatten norms
//! built on them.
//!
//! Columns of a working copy of `A` are rotated pairwise until mutually
//! orthogonal; the accumulated rotations form `V`, the column norms are the
//! singular values and the normalized columns form `U`. The method is slow
//! compared to bidiagonalization but computes small singular values to high
//! relative accuracy, which matters for trace norms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE, ZERO};

#[derive(Clone, Copy, Debug)]
pub struct JacobiOptions {
    /// Maximum number of full sweeps over all column pairs.
    pub max_sweeps: usize,
    /// Pair `(p, q)` counts as orthogonal when `|⟨a_p, a_q⟩| ≤ tol · ‖a_p‖‖a_q‖`.
    pub tolerance: f64,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 60,
            tolerance: 2.0 * f64::EPSILON,
        }
    }
}

/// Full decomposition `A = U diag(σ) V*` with `σ` non-increasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.u.dim();
        let us = ComplexMatrix::from_fn(n, |r, c| self.u[(r, c)] * self.singular_values[c]);
        &us * &self.v.adjoint()
    }
}

struct JacobiState {
    n: usize,
    // column-major working copies
    a: Vec<Complex64>,
    v: Vec<Complex64>,
    converged: bool,
    sweeps: usize,
}

fn run_jacobi(m: &ComplexMatrix, opts: JacobiOptions) -> JacobiState {
    let n = m.dim();
    let mut a = vec![ZERO; n * n];
    let mut v = vec![ZERO; n * n];
    for c in 0..n {
        for r in 0..n {
            a[c * n + r] = m[(r, c)];
        }
        v[c * n + c] = ONE;
    }
    let mut norms: Vec<f64> = (0..n)
        .map(|c| a[c * n..(c + 1) * n].iter().map(|z| z.norm_sqr()).sum())
        .collect();

    // Columns this small only carry singular values below n·ε·‖A‖_F; their
    // mutual orthogonality is noise and would otherwise stall convergence.
    let negligible = (n as f64 * f64::EPSILON).powi(2) * norms.iter().sum::<f64>();

    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged && sweeps < opts.max_sweeps {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let (cp, cq) = column_pair(&a, n, p, q);
                let gamma: Complex64 = cp.iter().zip(cq).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= opts.tolerance * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut a, n, p, q, cs, sn, phase);
                rotate(&mut v, n, p, q, cs, sn, phase);
                // Recompute rather than update to avoid drift in the norms.
                norms[p] = a[p * n..(p + 1) * n].iter().map(|z| z.norm_sqr()).sum();
                norms[q] = a[q * n..(q + 1) * n].iter().map(|z| z.norm_sqr()).sum();
            }
        }
        if !rotated {
            converged = true;
        }
    }
    JacobiState {
        n,
        a,
        v,
        converged,
        sweeps,
    }
}

fn column_pair(a: &[Complex64], n: usize, p: usize, q: usize) -> (&[Complex64], &[Complex64]) {
    (&a[p * n..(p + 1) * n], &a[q * n..(q + 1) * n])
}

/// Right-multiplies columns `p, q` by the unitary rotation
/// `[[c, s·φ], [−s·φ̄, c]]` where `φ` is the phase of `⟨a_p, a_q⟩`.
fn rotate(m: &mut [Complex64], n: usize, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (head, tail) = m.split_at_mut(q * n);
    let col_p = &mut head[p * n..(p + 1) * n];
    let col_q = &mut tail[..n];
    let phase_conj = phase.conj();
    for (xp, xq) in col_p.iter_mut().zip(col_q.iter_mut()) {
        let ap = *xp;
        let aq = *xq;
        *xp = ap * c - aq * phase_conj * s;
        *xq = ap * phase * s + aq * c;
    }
}

fn sorted_values(state: &JacobiState) -> Vec<(usize, f64)> {
    let n = state.n;
    let mut vals: Vec<(usize, f64)> = (0..n)
        .map(|c| {
            let s: f64 = state.a[c * n..(c + 1) * n]
                .iter()
                .map(|z| z.norm_sqr())
                .sum();
            (c, s.sqrt())
        })
        .collect();
    vals.sort_by(|x, y| y.1.total_cmp(&x.1));
    vals
}

/// Full SVD with the default iteration cap.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    svd_with(a, JacobiOptions::default())
}

pub fn svd_with(a: &ComplexMatrix, opts: JacobiOptions) -> Result<Svd> {
    let state = run_jacobi(a, opts);
    if !state.converged {
        return Err(Error::NoConvergence {
            routine: "one-sided Jacobi SVD",
            iterations: state.sweeps,
        });
    }
    let n = state.n;
    let order = sorted_values(&state);
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut v = ComplexMatrix::zeros(n);
    let mut singular_values = Vec::with_capacity(n);
    let frobenius = order.iter().map(|x| x.1 * x.1).sum::<f64>().sqrt();
    let cutoff = frobenius * f64::EPSILON * n as f64;
    for (k, &(c, sigma)) in order.iter().enumerate() {
        singular_values.push(sigma);
        for r in 0..n {
            v[(r, k)] = state.v[c * n + r];
        }
        if sigma > cutoff && sigma > 0.0 {
            u_cols.push(
                state.a[c * n..(c + 1) * n]
                    .iter()
                    .map(|z| z / sigma)
                    .collect(),
            );
        } else {
            u_cols.push(complete_orthonormal(&u_cols, n));
        }
    }
    let u = ComplexMatrix::from_fn(n, |r, c| u_cols[c][r]);
    Ok(Svd {
        u,
        singular_values,
        v,
    })
}

/// A unit vector orthogonal to `basis`, found by Gram–Schmidt on standard basis vectors.
fn complete_orthonormal(basis: &[Vec<Complex64>], n: usize) -> Vec<Complex64> {
    for j in 0..n {
        let mut w = vec![ZERO; n];
        w[j] = ONE;
        for _ in 0..2 {
            for b in basis {
                let proj: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            return w.into_iter().map(|z| z / norm).collect();
        }
    }
    vec![ZERO; n]
}

/// Singular values in non-increasing order.
pub fn svd_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    svd_values_with(a, JacobiOptions::default())
}

pub fn svd_values_with(a: &ComplexMatrix, opts: JacobiOptions) -> Result<Vec<f64>> {
    let state = run_jacobi(a, opts);
    if !state.converged {
        return Err(Error::NoConvergence {
            routine: "one-sided Jacobi SVD",
            iterations: state.sweeps,
        });
    }
    Ok(sorted_values(&state).into_iter().map(|(_, s)| s).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schatten {
    /// Trace norm, sum of singular values.
    One,
    /// Hilbert–Schmidt (Frobenius) norm.
    Two,
    /// Operator norm, largest singular value.
    Inf,
}

/// Schatten p-norm for p ∈ {1, 2, ∞}.
///
/// The Frobenius norm is computed from the entries. The other two go through
/// Jacobi with a generous sweep cap; if that cap is ever hit the column norms
/// at that point are used as they stand.
pub fn schatten_norm(a: &ComplexMatrix, p: Schatten) -> f64 {
    if p == Schatten::Two {
        return a.frobenius_norm();
    }
    let state = run_jacobi(
        a,
        JacobiOptions {
            max_sweeps: 200,
            ..JacobiOptions::default()
        },
    );
    let values = sorted_values(&state);
    match p {
        Schatten::One => values.iter().map(|x| x.1).sum(),
        Schatten::Inf => values.first().map_or(0.0, |x| x.1),
        Schatten::Two => unreachable!(),
    }
}

pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    schatten_norm(a, Schatten::One)
}

pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    schatten_norm(a, Schatten::Inf)
}
