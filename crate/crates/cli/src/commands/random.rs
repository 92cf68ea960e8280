//! `ipfactor random --n … --m … --seed … --out spec.json` — generate a
//! positive-definite spec from Gram-square pairs, byte-deterministic per
//! seed.

use std::path::Path;

use ipfactor_core::random::random_positive_pairs;
use ipfactor_core::Tol;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commands::{write_output, EXIT_OK, EXIT_PARSE};
use crate::io::{canonical_json, opsum_spec_value};

const GRAM_MARGIN: f64 = 0.1;

pub fn execute(n: usize, m: usize, seed: u64, out: Option<&Path>, _tol: &Tol) -> i32 {
    if n < 1 || n > 16 {
        eprintln!("usage error: --n must lie in 1..=16, got {n}");
        return EXIT_PARSE;
    }
    if m < 1 || m > n * n {
        eprintln!("usage error: --m must lie in 1..=n² = {}, got {m}", n * n);
        return EXIT_PARSE;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_positive_pairs(n, m, GRAM_MARGIN, &mut rng);
    let doc = canonical_json(&opsum_spec_value(&s, Some(seed)));
    if let Err(code) = write_output(out, &doc) {
        return code;
    }
    EXIT_OK
}
