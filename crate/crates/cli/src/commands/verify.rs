//! `ipfactor verify <cert> <spec>` — recompute every certificate claim.

use std::path::Path;

use ipfactor_core::Tol;

use crate::commands::{read_file, EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC};
use crate::io::{CertificateDoc, ProblemSpec};

pub fn execute(cert_path: &Path, spec_path: &Path, tol: &Tol) -> i32 {
    let cert_text = match read_file(cert_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let spec_text = match read_file(spec_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let doc = match CertificateDoc::parse(&cert_text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let spec = match ProblemSpec::parse(&spec_text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };

    if !doc.tool_version.is_empty() {
        println!("certificate produced by: {}", doc.tool_version);
    }
    if doc.problem_hash != spec.hash {
        eprintln!(
            "hash mismatch: certificate is bound to {} but the spec hashes to {}",
            doc.problem_hash, spec.hash
        );
        return EXIT_PARSE;
    }

    let reference = match spec.opsum(tol) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_SEMANTIC;
        }
    };

    let report = doc.certificate.verify(&reference, tol);
    for check in &report.checks {
        println!(
            "[{}] {}: {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    // The stored residual must also match the recomputed facts.
    let stored = doc.certificate.residual;
    let mut fresh = doc.certificate.clone();
    let residual_consistent = match fresh.recompute(&reference, tol) {
        Ok(()) => {
            let consistent = (fresh.residual - stored).abs() <= 1e-12 + stored.abs() * 1e-6;
            println!(
                "[{}] stored_residual: stored {stored:.3e}, recomputed {:.3e}",
                if consistent { "PASS" } else { "FAIL" },
                fresh.residual
            );
            consistent
        }
        Err(_) => report.ok, // recompute failure already reflected in checks
    };

    if report.ok && residual_consistent {
        println!("certificate OK");
        EXIT_OK
    } else {
        EXIT_SEMANTIC
    }
}
