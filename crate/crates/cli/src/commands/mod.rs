//! Subcommand implementations. Each module exposes a single `execute`
//! returning the process exit code.
//!
//! Exit codes are a stable contract: 0 success, 1 semantic failure (not an
//! inner product, failed check), 2 I/O or parse error (including hash
//! mismatch), 3 requested form not achieved, 4 numerical failure.

use std::path::Path;

use ipfactor_core::Error;

pub mod decompose;
pub mod demo;
pub mod random;
pub mod validate;
pub mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FORM: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

pub(crate) fn read_file(path: &Path) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })
}

pub(crate) fn write_output(path: Option<&Path>, content: &str) -> Result<(), i32> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            EXIT_PARSE
        }),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

/// Map core pipeline errors onto the exit-code contract.
pub(crate) fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::NotSelfAdjoint { .. }
        | Error::NotPositiveDefinite { .. }
        | Error::NotPositive { .. }
        | Error::NotHermitian { .. }
        | Error::ZeroMap
        | Error::InvalidCertificate(_)
        | Error::EpsilonOutOfRange(_)
        | Error::DimMismatch(_)
        | Error::NonFinite(_) => EXIT_SEMANTIC,
        Error::ProbeFailed
        | Error::BackoffExhausted { .. }
        | Error::BranchCutExhausted { .. }
        | Error::SkewCheckFailed { .. }
        | Error::ConjSqrtDefect { .. }
        | Error::SchurFailed
        | Error::Singular
        | Error::CholeskyFailed
        | Error::NotConjInvolution { .. }
        | Error::ResidualTooLarge { .. }
        | Error::CrossCheckFailed { .. }
        | Error::HermitizeVerify(_)
        | Error::Numerical(_) => EXIT_NUMERIC,
        Error::DependentFamily | Error::MalformedDependency(_) => EXIT_SEMANTIC,
    }
}

pub(crate) fn format_cmat(m: &ipfactor_core::CMat) -> String {
    let n = m.dim();
    let mut out = String::new();
    for i in 0..n {
        out.push_str("  [");
        for j in 0..n {
            let z = m.get(i, j);
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("{:+.6}{:+.6}i", z.re, z.im));
        }
        out.push_str("]\n");
    }
    out
}
