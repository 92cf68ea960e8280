//! Seeded random generators for maps and matrices.
//!
//! All randomness flows through caller-provided RNGs, so every construction
//! is reproducible from its seed regardless of execution order.

use rand::Rng;

use crate::matspace::{c64, CMat, CVec, Complex64};
use crate::superop::{independence_ratio, OpSum};

/// Entries uniform in the unit square of ℂ.
pub fn random_cmat(n: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .expect("finite by construction")
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMat {
    let g = random_cmat(n, rng);
    g.add(&g.adjoint()).scale_re(0.5)
}

/// Gram-square construction G*G + margin·I; positive definite by Lemma-level
/// arithmetic, margin bounded away from zero.
pub fn random_positive(n: usize, margin: f64, rng: &mut impl Rng) -> CMat {
    let g = random_cmat(n, rng);
    g.adjoint().mul(&g).add(&CMat::identity(n).scale_re(margin))
}

pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> CVec {
    loop {
        let v = CVec::from_slice(
            &(0..n)
                .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect::<Vec<_>>(),
        )
        .expect("finite");
        if v.norm() > 1e-3 {
            return v.normalized();
        }
    }
}

/// m positive pairs (Gram squares), the generator behind `random` specs.
/// The resulting map is self-adjoint and positive definite.
pub fn random_positive_pairs(n: usize, m: usize, margin: f64, rng: &mut impl Rng) -> OpSum {
    let pairs = (0..m)
        .map(|_| (random_positive(n, margin, rng), random_positive(n, margin, rng)))
        .collect();
    OpSum::new(n, pairs).expect("dims consistent")
}

/// Random m×m real mixing with bounded condition number, as matrix rows.
fn random_real_mixing(m: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    loop {
        let mix: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        if let Some(inv_t) = invert_transpose(&mix) {
            let norm: f64 = mix.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
            let inv_norm: f64 = inv_t.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
            if norm * inv_norm < 50.0 * m as f64 {
                return mix;
            }
        }
    }
}

fn invert_transpose(mix: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let m = mix.len();
    let mat = nalgebra::DMatrix::<f64>::from_fn(m, m, |i, j| mix[i][j]);
    mat.transpose().try_inverse().map(|inv| {
        (0..m)
            .map(|i| (0..m).map(|j| inv[(i, j)]).collect())
            .collect()
    })
}

/// A positive-definite map presented as m Hermitian pairs that are not
/// individually positive: positive Gram pairs scrambled by an
/// apply-invariant real mixing (E = M·A, F = M⁻ᵀ·B leaves Σ AᵢXBᵢ fixed,
/// and real combinations keep every matrix Hermitian).
pub fn random_positive_hermitian_opsum(n: usize, m: usize, rng: &mut impl Rng) -> OpSum {
    loop {
        let base = random_positive_pairs(n, m, 0.2, rng);
        let mix = random_real_mixing(m, rng);
        let inv_t = invert_transpose(&mix).expect("conditioned in the generator");
        let pairs: Vec<(CMat, CMat)> = (0..m)
            .map(|i| {
                let mut e = CMat::zeros(n);
                let mut f = CMat::zeros(n);
                for j in 0..m {
                    e = e.add(&base.pairs()[j].0.scale_re(mix[i][j]));
                    f = f.add(&base.pairs()[j].1.scale_re(inv_t[i][j]));
                }
                (e, f)
            })
            .collect();
        let out = OpSum::new(n, pairs).expect("dims consistent");
        let e_fam: Vec<CMat> = out.pairs().iter().map(|(e, _)| e.clone()).collect();
        let f_fam: Vec<CMat> = out.pairs().iter().map(|(_, f)| f.clone()).collect();
        if independence_ratio(&e_fam) > 1e-6 && independence_ratio(&f_fam) > 1e-6 {
            return out;
        }
    }
}

/// A self-adjoint (not necessarily positive) map with non-Hermitian pairs:
/// random Hermitian pairs scrambled by a complex mixing, which preserves the
/// map and therefore self-adjointness but hides the Hermitian structure.
pub fn random_selfadjoint_opsum(n: usize, m: usize, rng: &mut impl Rng) -> OpSum {
    loop {
        let base: Vec<(CMat, CMat)> = (0..m)
            .map(|_| (random_hermitian(n, rng), random_hermitian(n, rng)))
            .collect();
        let a_fam: Vec<CMat> = base.iter().map(|(a, _)| a.clone()).collect();
        let b_fam: Vec<CMat> = base.iter().map(|(_, b)| b.clone()).collect();
        if independence_ratio(&a_fam) < 1e-3 || independence_ratio(&b_fam) < 1e-3 {
            continue;
        }

        let mix = random_complex_mixing(m, rng);
        let inv_t = match invert_transpose_c(&mix) {
            Some(x) => x,
            None => continue,
        };
        let pairs: Vec<(CMat, CMat)> = (0..m)
            .map(|i| {
                let mut e = CMat::zeros(n);
                let mut f = CMat::zeros(n);
                for j in 0..m {
                    e = e.add(&base[j].0.scale(mix[i][j]));
                    f = f.add(&base[j].1.scale(inv_t[i][j]));
                }
                (e, f)
            })
            .collect();
        let out = OpSum::new(n, pairs).expect("dims consistent");
        let e_fam: Vec<CMat> = out.pairs().iter().map(|(e, _)| e.clone()).collect();
        let f_fam: Vec<CMat> = out.pairs().iter().map(|(_, f)| f.clone()).collect();
        if independence_ratio(&e_fam) > 1e-6 && independence_ratio(&f_fam) > 1e-6 {
            return out;
        }
    }
}

fn random_complex_mixing(m: usize, rng: &mut impl Rng) -> Vec<Vec<Complex64>> {
    (0..m)
        .map(|_| {
            (0..m)
                .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}

fn invert_transpose_c(mix: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let m = mix.len();
    let mat = nalgebra::DMatrix::<Complex64>::from_fn(m, m, |i, j| mix[i][j]);
    let inv = mat.transpose().try_inverse()?;
    let norm = mat.norm() * inv.norm();
    if norm > 100.0 * m as f64 {
        return None;
    }
    Some(
        (0..m)
            .map(|i| (0..m).map(|j| inv[(i, j)]).collect())
            .collect(),
    )
}
