mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::output::CliError;

#[derive(Parser)]
#[command(name = "canonfock", version, about = "Canonical transformations on ultracoherent vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config: a file path or an inline object.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized case generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance override for pass/fail checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Fock cutoff for the oracle.
    #[arg(long, global = true, default_value_t = 40)]
    cutoff: usize,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Check the canonical conditions of a pair (U, V).
    CanonCheck,
    /// Reduce a squeeze generator to single-mode squeezes and squeeze the vacuum.
    Squeeze,
    /// Inner product of two ultracoherent vectors.
    Overlap,
    /// Compare closed forms with the truncated-Fock oracle.
    OracleCompare,
    /// Van Hove decoherence curves.
    Vanhove,
    /// Wigner-equation coefficients on a time grid.
    QbmCoeffs,
    /// Gaussian moment trajectory.
    QbmEvolve,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::CanonCheck => "canon-check",
            Command::Squeeze => "squeeze",
            Command::Overlap => "overlap",
            Command::OracleCompare => "oracle-compare",
            Command::Vanhove => "vanhove",
            Command::QbmCoeffs => "qbm-coeffs",
            Command::QbmEvolve => "qbm-evolve",
        }
    }
}

pub struct Run {
    pub command: &'static str,
    pub config: serde_json::Value,
    pub seed: u64,
    pub tol: Option<f64>,
    pub cutoff: usize,
    pub max_dim: usize,
}

fn load_config(arg: Option<&str>) -> Result<serde_json::Value, CliError> {
    let Some(arg) = arg else { return Ok(serde_json::Value::Null) };
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("config: {e}")))
}

fn max_dim() -> Result<usize, CliError> {
    match std::env::var("CANONFOCK_MAX_DIM") {
        Ok(v) => v.parse().map_err(|_| CliError::Validation(format!("CANONFOCK_MAX_DIM: not an integer: {v}"))),
        Err(_) => Ok(canonfock::tol::MAX_FOCK_DIM),
    }
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let run = Run {
        command: cli.command.name(),
        config: load_config(cli.config.as_deref())?,
        seed: cli.seed,
        tol: cli.tol,
        cutoff: cli.cutoff,
        max_dim: max_dim()?,
    };
    if let Some(t) = run.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Validation(format!("--tol must be positive, got {t}")));
        }
    }
    match cli.command {
        Command::CanonCheck => commands::canon_check(&run),
        Command::Squeeze => commands::squeeze(&run),
        Command::Overlap => commands::overlap(&run),
        Command::OracleCompare => commands::oracle_compare(&run),
        Command::Vanhove => commands::vanhove(&run),
        Command::QbmCoeffs => commands::qbm_coeffs(&run),
        Command::QbmEvolve => commands::qbm_evolve(&run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            let report = json!({ "error": e.kind(), "message": e.to_string(), "exit_code": code });
            eprintln!("{report}");
            ExitCode::from(code)
        }
    }
}
