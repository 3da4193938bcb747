use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uplab::growth::WitnessFamily;
use uplab::report::{
    self, render_bracket, render_info, render_pairing, render_verify, render_witness, OutputFormat,
    RunConfig,
};
use uplab::{Error, MatrixJson};

/// Numerical checks of the Poisson-Lie structure on truncated unitary groups.
#[derive(Parser, Debug)]
#[command(name = "uplab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the randomized identity suite; exits 1 if any identity fails.
    Verify(Common),
    /// Trace-norm growth of T₊ and of ad* on b⁺; --dims are half-widths N.
    Witness {
        #[command(flatten)]
        common: Common,
        /// Witness family placed on the negative half.
        #[arg(long, env = "UPLAB_WITNESS", default_value = "flat")]
        witness: WitnessFamily,
    },
    /// Quotient bracket of two matrices read from JSON files.
    Bracket {
        x1: PathBuf,
        x2: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Smallest singular value of the u(n) × b⁺(n) pairing for each n in --dims.
    Pairing(Common),
    /// Version, defaults and tolerances.
    Info(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Comma-separated dimensions.
    #[arg(long, env = "UPLAB_DIMS", value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, env = "UPLAB_TRIALS", default_value_t = report::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, env = "UPLAB_SEED", default_value_t = report::DEFAULT_SEED)]
    seed: u64,
    /// Tolerance override `identity=value`; repeatable or comma-separated.
    #[arg(long = "tol", env = "UPLAB_TOL", value_delimiter = ',')]
    tol: Vec<String>,
    /// json, csv, pretty or jsonl.
    #[arg(long, env = "UPLAB_OUTPUT", default_value = "json")]
    output: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, env = "UPLAB_OUT")]
    out: Option<PathBuf>,
    #[arg(long, env = "UPLAB_THREADS", default_value_t = 1)]
    threads: usize,
}

impl Common {
    fn config(&self, default_dims: &[usize]) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig {
            dims: self.dims.clone().unwrap_or_else(|| default_dims.to_vec()),
            trials: self.trials,
            seed: self.seed,
            output: self.output,
            threads: self.threads,
            ..RunConfig::default()
        };
        for spec in &self.tol {
            cfg.set_tolerance(spec)?;
        }
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn read_matrix(path: &Path) -> Result<uplab::ComplexMatrix, Error> {
    MatrixJson::parse(&fs::read_to_string(path)?)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify(common) => {
            let cfg = common.config(&report::DEFAULT_DIMS)?;
            let result = report::run_verify(&cfg)?;
            common.emit(&render_verify(&result, cfg.output))?;
            Ok(if result.pass { 0 } else { 1 })
        }
        Command::Witness { common, witness } => {
            let mut cfg = common.config(&[4, 8, 16, 32, 64, 128])?;
            cfg.witness = witness;
            let series = report::run_witness(&cfg)?;
            common.emit(&render_witness(&series, cfg.output))?;
            Ok(0)
        }
        Command::Bracket { x1, x2, common } => {
            let output = report::run_bracket(&read_matrix(&x1)?, &read_matrix(&x2)?)?;
            common.emit(&render_bracket(&output, common.output))?;
            Ok(0)
        }
        Command::Pairing(common) => {
            let cfg = common.config(&[1, 2, 3, 4, 5, 6, 7, 8])?;
            let rows = report::run_pairing(&cfg)?;
            common.emit(&render_pairing(&rows, cfg.output))?;
            Ok(0)
        }
        Command::Info(common) => {
            common.emit(&render_info(&report::info(), common.output))?;
            Ok(0)
        }
    }
}

/// 0 pass, 1 verification failure, 2 usage or IO error.
fn exit_code<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("uplab: {e}");
            2
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(exit_code(std::env::args_os()))
}
