//! Run configuration, the randomized verification suite and report rendering
//! for the `uplab` binary.
//!
//! Every report is a pure function of its [`RunConfig`] and input files. Trials
//! may run on a thread pool, but each trial draws from its own derived seed and
//! records are sorted canonically before aggregation, so the output does not
//! depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{witness_growth, GrowthSeries, WitnessFamily};
use crate::matrix::{ComplexMatrix, MatrixJson};
use crate::pairing::{class_of, coadjoint_duality_residual, pairing_gram, QuotientClass};
use crate::poisson::{
    bracket_jacobi_residual, cocycle_residual, conj_identities_residual, derivative_e_residual,
    derivative_translated_residual, jacobi_cyclic_sum, quotient_bracket,
    sharp_contraction_residual,
};
use crate::random::{random_skew_hermitian, random_trace_class, random_unitary};
use crate::residual::{Identity, ResidualRecord};
use crate::truncation::{p_b2, BasisWindow};

pub const DEFAULT_DIMS: [usize; 4] = [2, 4, 8, 16];
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 42;

/// Identities exercised by `verify`, in canonical order.
pub const VERIFY_IDENTITIES: [Identity; 11] = [
    Identity::BracketJacobi,
    Identity::CoadjointDuality,
    Identity::Cocycle,
    Identity::ConjIdentityB,
    Identity::ConjIdentityU,
    Identity::DerivativeB2,
    Identity::DerivativeTranslated,
    Identity::Jacobi,
    Identity::JacobiCancellation,
    Identity::JacobiClosedForm,
    Identity::SharpContraction,
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Pretty,
    /// One JSON object per line.
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "pretty" => Ok(OutputFormat::Pretty),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(format!(
                "unknown output format '{other}' (expected json, csv, pretty or jsonl)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Overrides only; see [`RunConfig::tolerance`].
    pub tolerances: BTreeMap<Identity, f64>,
    pub output: OutputFormat,
    /// Worker threads. Not echoed in reports, which must not depend on it.
    #[serde(skip)]
    pub threads: usize,
    pub witness: WitnessFamily,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dims: DEFAULT_DIMS.to_vec(),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            tolerances: BTreeMap::new(),
            output: OutputFormat::default(),
            threads: 1,
            witness: WitnessFamily::default(),
        }
    }
}

impl RunConfig {
    pub fn tolerance(&self, identity: Identity) -> f64 {
        self.tolerances
            .get(&identity)
            .copied()
            .unwrap_or_else(|| identity.default_tolerance())
    }

    /// Parses `name=value` and records the override.
    pub fn set_tolerance(&mut self, spec: &str) -> Result<()> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("tolerance '{spec}' is not name=value")))?;
        let identity: Identity = name.trim().parse().map_err(Error::InvalidConfig)?;
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::InvalidConfig(format!("tolerance value '{value}' is not a number"))
        })?;
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tolerance for {identity} must be finite and non-negative"
            )));
        }
        self.tolerances.insert(identity, value);
        Ok(())
    }

    pub fn validate_verify(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::InvalidConfig("no dimensions given".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d == 0 || d % 2 == 1) {
            return Err(Error::InvalidConfig(format!(
                "dimension {d} is not a positive even number"
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        self.validate_threads()
    }

    fn validate_threads(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(Error::InvalidConfig("threads must be at least 1".into()));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        self.validate_threads()?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `seed ⊕ H(dim, trial, identity)` with `H` an FNV-1a hash finished by splitmix64.
pub fn trial_seed(seed: u64, dim: usize, trial: usize, identity: Identity) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let bytes = (dim as u64)
        .to_le_bytes()
        .into_iter()
        .chain((trial as u64).to_le_bytes())
        .chain(identity.name().bytes());
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(PRIME);
    }
    seed ^ splitmix64(h)
}

/// Independent stream `k` under a trial seed.
fn sub_seed(seed: u64, k: u64) -> u64 {
    splitmix64(seed ^ splitmix64(k))
}

fn random_class(dim: usize, seed: u64) -> QuotientClass {
    class_of(&random_trace_class(dim, seed, false))
}

/// Draws the inputs for one identity and evaluates it.
pub fn run_trial(
    identity: Identity,
    dim: usize,
    seed: u64,
    tolerance: f64,
) -> Result<ResidualRecord> {
    let s = |k| sub_seed(seed, k);
    let record = match identity {
        Identity::Cocycle => cocycle_residual(
            &random_unitary(dim, s(0)),
            &random_unitary(dim, s(1)),
            &random_class(dim, s(2)),
            &random_class(dim, s(3)),
        )?,
        Identity::Jacobi | Identity::JacobiClosedForm | Identity::JacobiCancellation => {
            let check = jacobi_cyclic_sum(
                &random_unitary(dim, s(0)),
                &random_class(dim, s(1)),
                &random_class(dim, s(2)),
                &random_class(dim, s(3)),
            )?;
            match identity {
                Identity::Jacobi => check.cyclic_sum,
                Identity::JacobiClosedForm => check.closed_form,
                _ => check.cancellation,
            }
        }
        Identity::ConjIdentityB | Identity::ConjIdentityU => {
            let check = conj_identities_residual(
                &random_unitary(dim, s(0)),
                &random_trace_class(dim, s(1), false),
            )?;
            if identity == Identity::ConjIdentityB {
                check.b
            } else {
                check.u
            }
        }
        Identity::DerivativeB2 => derivative_e_residual(
            &random_skew_hermitian(dim, s(0)),
            &random_class(dim, s(1)),
            &random_class(dim, s(2)),
            tolerance,
        )?,
        Identity::DerivativeTranslated => derivative_translated_residual(
            &random_unitary(dim, s(0)),
            &random_skew_hermitian(dim, s(1)),
            &random_class(dim, s(2)),
            &random_class(dim, s(3)),
            tolerance,
        )?,
        Identity::SharpContraction => sharp_contraction_residual(
            &random_unitary(dim, s(0)),
            &random_class(dim, s(1)),
            &random_class(dim, s(2)),
        )?,
        Identity::CoadjointDuality => {
            let w = BasisWindow::for_dim(dim)?;
            coadjoint_duality_residual(
                &random_skew_hermitian(dim, s(0)),
                &p_b2(&random_trace_class(dim, s(1), false), &w)?,
                &random_skew_hermitian(dim, s(2)),
            )?
        }
        Identity::BracketJacobi => bracket_jacobi_residual(
            &random_class(dim, s(0)),
            &random_class(dim, s(1)),
            &random_class(dim, s(2)),
        )?,
        Identity::CoadjointShortcut | Identity::CommutatorBlockForm => {
            return Err(Error::InvalidConfig(format!(
                "{identity} is deterministic and not part of the randomized suite"
            )))
        }
    };
    Ok(record.with_seed(seed))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentitySummary {
    pub identity: Identity,
    pub tolerance: f64,
    pub count: usize,
    pub max_relative: f64,
    pub mean_relative: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub identities: Vec<IdentitySummary>,
    pub pass: bool,
    /// Every trial, sorted by identity, dim and trial.
    #[serde(skip)]
    pub records: Vec<ResidualRecord>,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

pub fn run_verify(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate_verify()?;
    let mut jobs = Vec::new();
    for identity in VERIFY_IDENTITIES {
        for &dim in &cfg.dims {
            for trial in 0..cfg.trials {
                jobs.push((identity, dim, trial));
            }
        }
    }
    let pool = cfg.pool()?;
    let records = pool.install(|| {
        jobs.par_iter()
            .map(|&(identity, dim, trial)| {
                run_trial(
                    identity,
                    dim,
                    trial_seed(cfg.seed, dim, trial, identity),
                    cfg.tolerance(identity),
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let identities: Vec<IdentitySummary> = VERIFY_IDENTITIES
        .iter()
        .map(|&identity| {
            let rel: Vec<f64> = records
                .iter()
                .filter(|r| r.identity == identity)
                .map(ResidualRecord::relative)
                .collect();
            let tolerance = cfg.tolerance(identity);
            let max_relative = rel.iter().copied().fold(0.0, f64::max);
            // NaN must fail, so compare in the passing direction.
            let pass = rel.iter().all(|r| *r <= tolerance);
            IdentitySummary {
                identity,
                tolerance,
                count: rel.len(),
                max_relative,
                mean_relative: rel.iter().sum::<f64>() / rel.len() as f64,
                pass,
            }
        })
        .collect();
    let pass = identities.iter().all(|s| s.pass);
    Ok(VerificationReport {
        config: cfg.clone(),
        identities,
        pass,
        records,
    })
}

pub fn render_verify(report: &VerificationReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_pretty(report),
        OutputFormat::Jsonl => {
            let mut out = String::new();
            for r in &report.records {
                out.push_str(&r.to_json_line());
                out.push('\n');
            }
            out
        }
        OutputFormat::Csv => {
            let mut out =
                String::from("identity,tolerance,count,max_relative,mean_relative,pass\n");
            for s in &report.identities {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    s.identity, s.tolerance, s.count, s.max_relative, s.mean_relative, s.pass
                );
            }
            out
        }
        OutputFormat::Pretty => {
            let mut out = format!(
                "{:<24} {:>10} {:>6} {:>12} {:>12}  {}\n",
                "identity", "tolerance", "count", "max rel", "mean rel", "result"
            );
            for s in &report.identities {
                let _ = writeln!(
                    out,
                    "{:<24} {:>10.1e} {:>6} {:>12.3e} {:>12.3e}  {}",
                    s.identity.name(),
                    s.tolerance,
                    s.count,
                    s.max_relative,
                    s.mean_relative,
                    if s.pass { "pass" } else { "FAIL" }
                );
            }
            let _ = writeln!(
                out,
                "overall: {}",
                if report.pass { "pass" } else { "FAIL" }
            );
            out
        }
    }
}

/// `dims` are window half-widths `N` here.
pub fn run_witness(cfg: &RunConfig) -> Result<GrowthSeries> {
    let pool = cfg.pool()?;
    pool.install(|| witness_growth(&cfg.dims, cfg.witness))
}

pub fn render_witness(series: &GrowthSeries, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_pretty(series),
        OutputFormat::Jsonl => {
            let mut out = String::new();
            for row in &series.rows {
                out.push_str(&serde_json::to_string(row).expect("row serializes"));
                out.push('\n');
            }
            out
        }
        OutputFormat::Csv => series.to_csv(),
        OutputFormat::Pretty => {
            let mut out = format!(
                "witness: {}\n{:>6} {:>16} {:>16}\n",
                series.witness, "N", "witness_ratio", "coadjoint_ratio"
            );
            for r in &series.rows {
                let _ = writeln!(
                    out,
                    "{:>6} {:>16.10} {:>16.10}",
                    r.n, r.witness_ratio, r.coadjoint_ratio
                );
            }
            for (name, fit) in [
                ("witness", series.witness_fit),
                ("coadjoint", series.coadjoint_fit),
            ] {
                if let Some(f) = fit {
                    let _ = writeln!(
                        out,
                        "{name} fit: {:.6} ln N + {:.6}  (R² = {:.6})",
                        f.slope, f.intercept, f.r_squared
                    );
                }
            }
            out
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketOutput {
    /// Canonical Hermitian representative of `[[p_b2(x₁), p_b2(x₂)]]`.
    pub bracket: MatrixJson,
    /// `[p_b2(x₁), p_b2(x₂)]` itself, an element of `b⁺`.
    pub b_plus_commutator: MatrixJson,
}

pub fn run_bracket(x1: &ComplexMatrix, x2: &ComplexMatrix) -> Result<BracketOutput> {
    x1.check_same_dim(x2)?;
    let w = BasisWindow::for_dim(x1.dim())?;
    let comm = p_b2(x1, &w)?.commutator(&p_b2(x2, &w)?)?;
    let bracket = quotient_bracket(&class_of(x1), &class_of(x2))?;
    Ok(BracketOutput {
        bracket: bracket.to_json(),
        b_plus_commutator: comm.to_json(),
    })
}

fn matrix_csv(out: &mut String, name: &str, m: &MatrixJson) {
    for r in 0..m.dim {
        for c in 0..m.dim {
            let _ = writeln!(out, "{name},{r},{c},{},{}", m.re[r][c], m.im[r][c]);
        }
    }
}

fn matrix_pretty(out: &mut String, name: &str, m: &MatrixJson) {
    let _ = writeln!(out, "{name}:");
    for r in 0..m.dim {
        let cells: Vec<String> = (0..m.dim)
            .map(|c| format!("{:>9.4}{:+.4}i", m.re[r][c], m.im[r][c]))
            .collect();
        let _ = writeln!(out, "  {}", cells.join("  "));
    }
}

pub fn render_bracket(output: &BracketOutput, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_pretty(output),
        OutputFormat::Jsonl => format!(
            "{}\n",
            serde_json::to_string(output).expect("bracket serializes")
        ),
        OutputFormat::Csv => {
            let mut out = String::from("matrix,row,col,re,im\n");
            matrix_csv(&mut out, "bracket", &output.bracket);
            matrix_csv(&mut out, "b_plus_commutator", &output.b_plus_commutator);
            out
        }
        OutputFormat::Pretty => {
            let mut out = String::new();
            matrix_pretty(&mut out, "bracket", &output.bracket);
            matrix_pretty(&mut out, "b_plus_commutator", &output.b_plus_commutator);
            out
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairingRow {
    pub n: usize,
    pub smallest_singular_value: f64,
}

/// Smallest singular value of the `u(n) × b⁺(n)` pairing Gram matrix for each
/// `n` in `dims`.
pub fn run_pairing(cfg: &RunConfig) -> Result<Vec<PairingRow>> {
    if cfg.dims.is_empty() {
        return Err(Error::InvalidConfig("no dimensions given".into()));
    }
    let pool = cfg.pool()?;
    pool.install(|| {
        cfg.dims
            .par_iter()
            .map(|&n| {
                Ok(PairingRow {
                    n,
                    smallest_singular_value: pairing_gram(n)?.smallest_singular_value,
                })
            })
            .collect()
    })
}

pub fn render_pairing(rows: &[PairingRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_pretty(&rows),
        OutputFormat::Jsonl => rows
            .iter()
            .map(|r| format!("{}\n", serde_json::to_string(r).expect("row serializes")))
            .collect(),
        OutputFormat::Csv => {
            let mut out = String::from("n,smallest_singular_value\n");
            for r in rows {
                let _ = writeln!(out, "{},{}", r.n, r.smallest_singular_value);
            }
            out
        }
        OutputFormat::Pretty => {
            let mut out = format!("{:>4} {:>24}\n", "n", "smallest singular value");
            for r in rows {
                let _ = writeln!(out, "{:>4} {:>24.12}", r.n, r.smallest_singular_value);
            }
            out
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Info {
    pub name: &'static str,
    pub version: &'static str,
    pub default_dims: Vec<usize>,
    pub default_trials: usize,
    pub default_seed: u64,
    pub tolerances: BTreeMap<Identity, f64>,
}

pub fn info() -> Info {
    Info {
        name: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        default_dims: DEFAULT_DIMS.to_vec(),
        default_trials: DEFAULT_TRIALS,
        default_seed: DEFAULT_SEED,
        tolerances: Identity::ALL
            .iter()
            .map(|&i| (i, i.default_tolerance()))
            .collect(),
    }
}

pub fn render_info(info: &Info, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_pretty(info),
        OutputFormat::Jsonl => format!(
            "{}\n",
            serde_json::to_string(info).expect("info serializes")
        ),
        OutputFormat::Csv => {
            let mut out = String::from("identity,default_tolerance\n");
            for (id, tol) in &info.tolerances {
                let _ = writeln!(out, "{id},{tol}");
            }
            out
        }
        OutputFormat::Pretty => {
            let mut out = format!(
                "{} {}\ndefault dims {:?}, trials {}, seed {}\n",
                info.name, info.version, info.default_dims, info.default_trials, info.default_seed
            );
            for (id, tol) in &info.tolerances {
                let _ = writeln!(out, "  {:<24} {:.0e}", id.name(), tol);
            }
            out
        }
    }
}

fn json_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
