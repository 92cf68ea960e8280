//! `ipfactor decompose <spec> --form … --out cert.json` — run the pipeline
//! and emit a certificate.

use std::path::Path;

use ipfactor_core::pipeline::{decompose, DecomposeTarget};
use ipfactor_core::Tol;

use crate::commands::{
    error_exit_code, read_file, write_output, EXIT_FORM, EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC,
};
use crate::io::{canonical_json, certificate_to_value, ProblemSpec};
use crate::FormArg;

pub fn execute(spec_path: &Path, form: FormArg, out: Option<&Path>, tol: &Tol) -> i32 {
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

    // Validate first: decomposition presumes an inner product.
    let sm = spec.supermat();
    match sm.is_positive_definite(tol) {
        Ok((true, _)) => {}
        Ok((false, min_eig)) => {
            eprintln!("error: not an inner product (min eigenvalue {min_eig:.3e})");
            return EXIT_SEMANTIC;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_SEMANTIC;
        }
    }

    let map = match spec.opsum(tol) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_SEMANTIC;
        }
    };
    let target = match form {
        FormArg::Opsum => DecomposeTarget::OperatorSum,
        FormArg::Hermitian => DecomposeTarget::Hermitian,
        FormArg::Positive => DecomposeTarget::Positive,
        FormArg::MinusOne => DecomposeTarget::MinusOne,
        FormArg::Auto => DecomposeTarget::Auto,
    };

    let outcome = match decompose(&map, target, tol) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return error_exit_code(&e);
        }
    };

    let cert = &outcome.certificate;
    println!(
        "form achieved: {} ({} pair(s), residual {:.3e})",
        cert.form.tag(),
        cert.pairs.len(),
        cert.residual
    );
    if let Some(route) = outcome.route {
        println!("hermitization route: {route:?}");
    }

    let doc = canonical_json(&certificate_to_value(cert, &spec.hash));
    if let Err(code) = write_output(out, &doc) {
        return code;
    }

    if !outcome.achieved_requested {
        if let Some(report) = &outcome.report {
            eprintln!("requested positive form not achieved; best margin {:.3e} at δ = {:.0e}",
                report.best_margin, report.best_delta);
            eprintln!("{}", report.message);
        }
        return EXIT_FORM;
    }
    EXIT_OK
}
