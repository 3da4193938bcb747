//! Trace-norm growth of the triangular truncation and of the coadjoint
//! action on `b⁺`.
//!
//! For each half-width `N` a Hermitian witness `K` with `‖K‖₁ = 1` is placed on
//! `H₋`, the block operators `A = [[0, u], [−u*, 0]]` and `B = [[0, uK], [0, 0]]`
//! are built on the window `{−N, …, N−1}`, and two ratios are recorded:
//! `‖T₊(K)‖₁ / ‖K‖₁` and `‖ad*_A B‖₁ / ‖B‖₁`. Both are bounded at every finite
//! `N` but grow without bound as `N → ∞`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};
use crate::pairing::coadjoint_algebra_bplus;
use crate::residual::{Identity, ResidualRecord};
use crate::svd::trace_norm;
use crate::truncation::{build_block_a, build_block_b, half_diagonal_upper, shift_u, BasisWindow};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessFamily {
    /// Rank-one projector onto the normalized all-ones vector.
    #[default]
    Flat,
    /// Entries `i/(j − k)` off the diagonal.
    Hilbert,
}

impl fmt::Display for WitnessFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessFamily::Flat => "flat",
            WitnessFamily::Hilbert => "hilbert",
        })
    }
}

impl FromStr for WitnessFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "flat" => Ok(WitnessFamily::Flat),
            "hilbert" => Ok(WitnessFamily::Hilbert),
            other => Err(format!(
                "unknown witness family '{other}' (expected flat or hilbert)"
            )),
        }
    }
}

fn check_half_width(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "witness half-width must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// `(j, k) ↦ i/(j − k)` on the `H₋` labels `−N…−1`, zero diagonal, rescaled
/// to unit trace norm.
pub fn hilbert_witness(n: usize) -> Result<ComplexMatrix> {
    check_half_width(n)?;
    let label = |s: usize| s as f64 - n as f64;
    let k = ComplexMatrix::from_fn(n, |r, c| {
        if r == c {
            ZERO
        } else {
            Complex64::new(0.0, 1.0 / (label(r) - label(c)))
        }
    });
    Ok(k.scale_real(1.0 / trace_norm(&k)))
}

/// `(1/N) · ones`, the projector onto `(1, …, 1)/√N`. Its trace norm is 1
/// exactly and `T₊` of it is `1/N` times the lower-triangular ones matrix.
pub fn flat_witness(n: usize) -> Result<ComplexMatrix> {
    check_half_width(n)?;
    let v = Complex64::new(1.0 / n as f64, 0.0);
    Ok(ComplexMatrix::from_fn(n, |_, _| v))
}

pub fn witness(family: WitnessFamily, n: usize) -> Result<ComplexMatrix> {
    match family {
        WitnessFamily::Flat => flat_witness(n),
        WitnessFamily::Hilbert => hilbert_witness(n),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub witness_ratio: f64,
    pub coadjoint_ratio: f64,
}

/// Least-squares fit `ratio ≈ slope · ln N + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl LogFit {
    /// `None` with fewer than two distinct abscissae.
    pub fn fit(ns: &[usize], ys: &[f64]) -> Option<Self> {
        if ns.len() < 2 || ns.len() != ys.len() {
            return None;
        }
        let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let len = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / len;
        let my = ys.iter().sum::<f64>() / len;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        if sxx == 0.0 {
            return None;
        }
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss_res: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - slope * x - intercept).powi(2))
            .sum();
        let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        let r_squared = if ss_tot == 0.0 {
            if ss_res == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            1.0 - ss_res / ss_tot
        };
        Some(Self {
            slope,
            intercept,
            r_squared,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthSeries {
    pub witness: WitnessFamily,
    pub rows: Vec<GrowthRow>,
    pub witness_fit: Option<LogFit>,
    pub coadjoint_fit: Option<LogFit>,
}

impl GrowthSeries {
    pub fn witness_ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.witness_ratio).collect()
    }

    pub fn coadjoint_ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.coadjoint_ratio).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,witness_ratio,coadjoint_ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                r.n, r.witness_ratio, r.coadjoint_ratio
            ));
        }
        out
    }
}

/// Builds `(A, B)` for the witness at half-width `n`.
pub fn block_pair(
    family: WitnessFamily,
    n: usize,
) -> Result<(
    BasisWindow,
    ComplexMatrix,
    crate::matrix::SkewHermitian,
    ComplexMatrix,
)> {
    let w = BasisWindow::new(n)?;
    let k = witness(family, n)?;
    let a = build_block_a(&w);
    let b = build_block_b(&k, &w)?;
    Ok((w, k, a, b))
}

pub fn growth_row(family: WitnessFamily, n: usize) -> Result<GrowthRow> {
    let (_, k, a, b) = block_pair(family, n)?;
    // H₋ labels −N…−1 are stored ascending, so T₊ keeps the storage lower triangle.
    let truncated = lower_with_diagonal(&k);
    let witness_ratio = trace_norm(&truncated) / trace_norm(&k);
    let coadjoint = coadjoint_algebra_bplus(&a, &b)?;
    let coadjoint_ratio = trace_norm(&coadjoint) / trace_norm(&b);
    Ok(GrowthRow {
        n,
        witness_ratio,
        coadjoint_ratio,
    })
}

fn lower_with_diagonal(k: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(k.dim(), |r, c| if r >= c { k[(r, c)] } else { ZERO })
}

/// Growth series over strictly increasing half-widths, rows evaluated in parallel.
pub fn witness_growth(ns: &[usize], family: WitnessFamily) -> Result<GrowthSeries> {
    if ns.is_empty() {
        return Err(Error::InvalidConfig("empty list of half-widths".into()));
    }
    if ns.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidConfig(
            "half-widths must be strictly increasing".into(),
        ));
    }
    for &n in ns {
        check_half_width(n)?;
    }
    let rows = ns
        .par_iter()
        .map(|&n| growth_row(family, n))
        .collect::<Result<Vec<_>>>()?;
    let witness_fit = LogFit::fit(
        ns,
        &rows.iter().map(|r| r.witness_ratio).collect::<Vec<_>>(),
    );
    let coadjoint_fit = LogFit::fit(
        ns,
        &rows.iter().map(|r| r.coadjoint_ratio).collect::<Vec<_>>(),
    );
    Ok(GrowthSeries {
        witness: family,
        rows,
        witness_fit,
        coadjoint_fit,
    })
}

#[derive(Clone, Debug)]
pub struct CoadjointIdentityCheck {
    /// `ad*_A B` via the `[A,B] + [A,B]*` form against the Hermitian shortcut
    /// `−(2T₊₊ + T₀)([A, B])`.
    pub shortcut: ResidualRecord,
    /// `[A, B]` against the block-diagonal `diag(uKu*, −K)`.
    pub block_form: ResidualRecord,
    /// `|‖B‖₁ − ‖K‖₁|`.
    pub trace_norm_gap: f64,
}

pub fn coadjoint_norm_identity_check(
    n: usize,
    family: WitnessFamily,
) -> Result<CoadjointIdentityCheck> {
    let (w, k, a, b) = block_pair(family, n)?;
    let comm = a.matrix().commutator(&b)?;

    let full = coadjoint_algebra_bplus(&a, &b)?;
    let shortcut = -&half_diagonal_upper(&comm, &w)?.scale_real(2.0);
    let shortcut = ResidualRecord::new(
        Identity::CoadjointShortcut,
        w.dim(),
        (&full - &shortcut).max_abs(),
        full.max_abs(),
    );

    let u = shift_u(&w);
    let k_embedded = ComplexMatrix::embed(w.dim(), &k, w.negative_offset(), w.negative_offset());
    let closed = &(&(&u * &k_embedded) * &u.adjoint()) - &k_embedded;
    let block_form = ResidualRecord::new(
        Identity::CommutatorBlockForm,
        w.dim(),
        (&comm - &closed).max_abs(),
        comm.max_abs(),
    );

    Ok(CoadjointIdentityCheck {
        shortcut,
        block_form,
        trace_norm_gap: (trace_norm(&b) - trace_norm(&k)).abs(),
    })
}
