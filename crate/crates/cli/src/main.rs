//! `ipfactor` — validate inner products on n×n complex matrix space and
//! compute structured decompositions with machine-checkable certificates.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ipfactor::{commands, FormArg};
use ipfactor_core::Tol;

#[derive(Parser)]
#[command(
    name = "ipfactor",
    version,
    about = "Operator-sum, Hermitian, and positive-pair decompositions of inner products on matrix space",
    after_help = "Exit codes: 0 ok, 1 semantic failure, 2 I/O or parse error, \
                  3 requested form not achieved, 4 numerical failure.\n\
                  IPFACTOR_TOL scales every tolerance in the global config."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a spec defines an inner product (self-adjoint, positive definite).
    Validate {
        /// Problem spec (JSON).
        spec: PathBuf,
    },
    /// Decompose an inner product into the requested structured form.
    Decompose {
        /// Problem spec (JSON).
        spec: PathBuf,
        /// Target form.
        #[arg(long, value_enum, default_value_t = FormArg::Auto)]
        form: FormArg,
        /// Write the certificate here (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate against its problem spec.
    Verify {
        /// Certificate (JSON).
        cert: PathBuf,
        /// Problem spec (JSON) the certificate is bound to.
        spec: PathBuf,
    },
    /// Walk the ε-map through its decompositions and the obstruction audit.
    Demo {
        /// ε in the open interval (0, 1).
        #[arg(long)]
        epsilon: f64,
    },
    /// Generate a random positive-definite spec (deterministic per seed).
    Random {
        /// Matrix dimension n (1..=16).
        #[arg(long)]
        n: usize,
        /// Number of summands m (1..=n²).
        #[arg(long)]
        m: usize,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Write the spec here (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn tolerances() -> Tol {
    let base = Tol::default();
    match std::env::var("IPFACTOR_TOL") {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(f) if f > 0.0 && f.is_finite() => base.scaled(f),
            _ => {
                eprintln!("warning: ignoring invalid IPFACTOR_TOL={s:?}");
                base
            }
        },
        Err(_) => base,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = tolerances();
    let code = match cli.command {
        Command::Validate { spec } => commands::validate::execute(&spec, &tol),
        Command::Decompose { spec, form, out } => {
            commands::decompose::execute(&spec, form, out.as_deref(), &tol)
        }
        Command::Verify { cert, spec } => commands::verify::execute(&cert, &spec, &tol),
        Command::Demo { epsilon } => commands::demo::execute(epsilon, &tol),
        Command::Random { n, m, seed, out } => {
            commands::random::execute(n, m, seed, out.as_deref(), &tol)
        }
    };
    ExitCode::from(code as u8)
}
