//! `ipfactor validate <spec>` — does the map define an inner product?

use std::path::Path;

use ipfactor_core::Tol;

use crate::commands::{format_cmat, read_file, EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC};
use crate::io::ProblemSpec;

pub fn execute(spec_path: &Path, tol: &Tol) -> i32 {
    let text = match read_file(spec_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let spec = match ProblemSpec::parse(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };

    println!("dim: {}", spec.dim);
    if let Some(seed) = spec.seed {
        println!("seed: {seed}");
    }
    let sm = spec.supermat();
    let (self_adjoint, defect) = sm.is_self_adjoint(tol);
    println!("self-adjointness defect: {defect:.3e}");
    if !self_adjoint {
        println!("inner product: no (map is not self-adjoint)");
        return EXIT_SEMANTIC;
    }

    let (positive, min_eig) = match sm.is_positive_definite(tol) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_SEMANTIC;
        }
    };
    println!("min eigenvalue: {min_eig:.6e}");
    if positive {
        println!("inner product: yes");
        EXIT_OK
    } else {
        println!("inner product: no (quadratic form not positive definite)");
        if let Ok(Some(x)) = sm.violating_input(tol) {
            println!("violating X (⟨A(X), X⟩ ≤ 0):");
            print!("{}", format_cmat(&x));
        }
        EXIT_SEMANTIC
    }
}
