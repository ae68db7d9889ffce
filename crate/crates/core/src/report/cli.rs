use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::{
    analyze, inverse, load_operator, parse_point, to_json, verify, ReportError, SelectionInput, Suite, Tolerances,
    EXIT_CHECKS_FAILED, EXIT_OK, EXIT_RESIDUALS,
};
use crate::linalg::TOLERANCE_PROFILE_ENV;
use crate::operators::{truncate, OperatorModel};

/// Drazin, generalized Drazin and g_z-inverses of operator models.
///
/// The default tolerance profile comes from GZSPEC_TOL_PROFILE (`default` or
/// `strict`); --tol-rank and --tol-residual override single values.
#[derive(Debug, Parser)]
#[command(name = "gzspec", version)]
pub struct Cli {
    /// Relative cut for numerical rank.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_rank: Option<f64>,
    /// Threshold for every verification residual.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_residual: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify T - λ and report spectral tiers, kernel data and certificates.
    Analyze {
        spec: PathBuf,
        /// Exact complex point, e.g. `0`, `1/2`, `0.5+0i`, `2-i`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Build the g_z-inverse for a spectral set.
    Inverse {
        spec: PathBuf,
        #[arg(long, value_name = "PATH")]
        spectral_set: PathBuf,
        /// Shift of the algebraic route; must exceed max |λ| over σ.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
    },
    /// Run a verification suite: drazin, gz, splits, punctured, index, perturbation or all.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
        /// Sample count for the punctured and perturbation suites.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Leading N x N section of the model, written as a matrix operator spec.
    Truncate { spec: PathBuf, n: usize },
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code; diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gzspec: {e}");
            e.exit_code()
        }
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, ReportError> {
    let mut tol = match std::env::var(TOLERANCE_PROFILE_ENV) {
        Ok(name) => Tolerances::profile(&name)?,
        Err(_) => Tolerances::default(),
    };
    if let Some(x) = cli.tol_rank {
        tol.config.rank_rtol = x;
    }
    if let Some(x) = cli.tol_residual {
        tol.config.residual_tol = x;
    }
    tol.config.validate().map_err(|e| ReportError::Parse(e.to_string()))?;
    Ok(tol)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), ReportError> {
    let written = match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    written.map_err(|e| ReportError::Parse(format!("cannot write report: {e}")))
}

fn execute(cli: &Cli) -> Result<i32, ReportError> {
    let tol = tolerances(cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Analyze { spec, point } => {
            let point = parse_point(point)?;
            let (model, id) = load_operator(spec)?;
            let report = analyze(&model, &id, &point, &tol)?;
            emit(out, &to_json(&report))?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_CHECKS_FAILED })
        }
        Command::Inverse { spec, spectral_set, r } => {
            let r = r.as_deref().map(parse_point).transpose()?.map(|z| z.to_c64());
            let (model, id) = load_operator(spec)?;
            let text = std::fs::read_to_string(spectral_set)
                .map_err(|e| ReportError::Parse(format!("{}: {e}", spectral_set.display())))?;
            let selection = SelectionInput::from_json(&text)?;
            let report = inverse(&model, &id, &selection, r, &tol)?;
            emit(out, &to_json(&report))?;
            Ok(if report.passed { EXIT_OK } else { EXIT_RESIDUALS })
        }
        Command::Verify { spec, suite, samples } => {
            let suite: Suite = suite.parse()?;
            let (model, id) = load_operator(spec)?;
            let report = verify(&model, &id, suite, *samples, &tol);
            emit(out, &to_json(&report))?;
            Ok(if report.passed { EXIT_OK } else { EXIT_CHECKS_FAILED })
        }
        Command::Truncate { spec, n } => {
            let (model, _) = load_operator(spec)?;
            let section = truncate(&model, *n).map_err(ReportError::from_query)?;
            let mut text = OperatorModel::FiniteMatrix(section).to_json();
            text.push('\n');
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
    }
}
