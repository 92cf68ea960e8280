//! Rewriting a self-adjoint operator sum with Hermitian pairs.
//!
//! For a reduced self-adjoint Σ Eⱼ X Fⱼ, the adjoints of the E-family lie in
//! its own span: Eₖ* = Σⱼ conj(c_{k,j}) Eⱼ. The coefficient matrix C
//! satisfies C·conj(C) = I and admits a conjugate square root D (D² = C,
//! D·conj(D) = I, built from a purely imaginary logarithm). Mixing the
//! families by D,
//!
//!   Aₖ = Σⱼ conj(d_{k,j}) Eⱼ,   Bₖ = Σᵢ d_{i,k} Fᵢ,
//!
//! yields Hermitian pairs representing the same map with the same summand
//! count. When the logarithm's branch scan or skew verification fails (the
//! primary-function route is not available numerically), [`hermitize_doubling`]
//! provides the always-available fallback with at most 2m summands:
//! split each pair into its Hermitian and skew parts,
//!
//!   ((Eⱼ+Eⱼ*)/2, (Fⱼ+Fⱼ*)/2)  and  ((Eⱼ−Eⱼ*)/(−2i), (Fⱼ−Fⱼ*)/(2i)),
//!
//! then drop zero and dependent terms without leaving the Hermitian pairs
//! (real-coefficient elimination, since Hermitian matrices form a real
//! vector space).

use nalgebra::DMatrix;

use crate::config::{rel, Tol};
use crate::error::{Error, Result};
use crate::matspace::{c64, log_unit_conj, mat_exp, CMat, Complex64};
use crate::superop::{independence_ratio, unit_apply_distance, vec_col, OpSum};

/// m×m matrix C with C·conj(C) = I expressing the adjoints of a family in
/// its own span.
#[derive(Debug, Clone)]
pub struct ConjInvolution {
    m: usize,
    c: CMat,
}

impl ConjInvolution {
    pub fn new(c: CMat, tol: &Tol) -> Result<Self> {
        let m = c.dim();
        let defect = c.mul(&c.conj()).sub(&CMat::identity(m)).norm_fro();
        let bound = tol.involution * m as f64;
        if defect > bound {
            return Err(Error::NotConjInvolution { defect, bound });
        }
        Ok(ConjInvolution { m, c })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &CMat {
        &self.c
    }

    pub fn entry(&self, k: usize, j: usize) -> Complex64 {
        self.c.get(k, j)
    }
}

/// Conjugate square root: D² = C and D·conj(D) = I.
#[derive(Debug, Clone)]
pub struct ConjSqrt {
    m: usize,
    d: CMat,
}

impl ConjSqrt {
    fn verified(d: CMat, c: &ConjInvolution, tol: &Tol) -> Result<Self> {
        let m = d.dim();
        let sq_defect = d.mul(&d).sub(c.matrix()).norm_fro();
        let sq_bound = tol.conj_sqrt * rel(c.matrix().norm_fro());
        if sq_defect > sq_bound {
            return Err(Error::ConjSqrtDefect { which: "D^2 - C", defect: sq_defect });
        }
        let conj_defect = d.mul(&d.conj()).sub(&CMat::identity(m)).norm_fro();
        if conj_defect > tol.conj_sqrt * m as f64 {
            return Err(Error::ConjSqrtDefect { which: "D conj(D) - I", defect: conj_defect });
        }
        Ok(ConjSqrt { m, d })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &CMat {
        &self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.d.get(i, j)
    }
}

/// Least-squares coefficients expressing each Eₖ* in span{Eⱼ}.
///
/// Requires a reduced, self-adjoint input: a residual above
/// `tol.residual_fit · ‖Eₖ‖` means the closure property does not hold and the
/// call fails. The resulting C is verified to satisfy C·conj(C) = I and
/// cross-checked against the F-side relation Fₖ* = Σᵢ c_{i,k} Fᵢ.
pub fn compute_c(s: &OpSum, tol: &Tol) -> Result<ConjInvolution> {
    let m = s.len();
    if m == 0 {
        return Err(Error::ZeroMap);
    }
    let n = s.dim();

    // Stack the E-family as columns of an n²×m matrix.
    let e_stack = DMatrix::<Complex64>::from_fn(n * n, m, |r, j| vec_col(&s.pairs()[j].0)[r]);
    let svd = e_stack.clone().svd(true, true);

    // C row by row: Eₖ* = Σⱼ conj(c_{k,j}) Eⱼ  ⇔  E_stack · w = vec(Eₖ*)
    // with wⱼ = conj(c_{k,j}), solved by the pseudoinverse.
    let mut c = DMatrix::<Complex64>::zeros(m, m);
    for k in 0..m {
        let target = vec_col(&s.pairs()[k].0.adjoint());
        let w = svd
            .clone()
            .solve(&target, 0.0)
            .map_err(|e| Error::Numerical(format!("least squares failed: {e}")))?;
        let residual = (&e_stack * &w - &target).norm();
        let bound = tol.residual_fit * rel(s.pairs()[k].0.norm_fro());
        if residual > bound {
            return Err(Error::ResidualTooLarge { residual, bound });
        }
        for j in 0..m {
            c[(k, j)] = w[j].conj();
        }
    }
    let c = ConjInvolution::new(CMat::new(c)?, tol)?;

    // Cross-check the F-side relation with the same coefficients.
    for k in 0..m {
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..m {
            acc += s.pairs()[i].1.matrix().map(|z| z * c.entry(i, k));
        }
        let defect = (s.pairs()[k].1.adjoint().matrix() - acc).norm();
        if defect > tol.cross_check * rel(s.pairs()[k].1.norm_fro()) {
            return Err(Error::CrossCheckFailed { defect });
        }
    }
    Ok(c)
}

/// D = exp(½·Log C) with the branch-scanned purely imaginary logarithm.
///
/// Both defining identities are verified after the fact; failures signal the
/// caller to fall back to [`hermitize_doubling`]. Which of the several
/// conjugate square roots is returned is fixed by this construction.
pub fn conj_sqrt(c: &ConjInvolution, tol: &Tol) -> Result<ConjSqrt> {
    let l = log_unit_conj(c.matrix(), tol)?;
    let d = mat_exp(&l.scale_re(0.5));
    ConjSqrt::verified(d, c, tol)
}

/// Hermitian-pair rewrite of a reduced self-adjoint operator sum, preserving
/// the summand count.
///
/// Output pairs are rescaled so ‖Aₖ‖_F = ‖Bₖ‖_F; the rescaling is a real
/// scalar per pair and leaves both the map and Hermitian-ness intact. All
/// claims (Hermitian defect, apply-equivalence, linear independence of both
/// output families) are verified before returning.
pub fn hermitize(s: &OpSum, tol: &Tol) -> Result<OpSum> {
    let c = compute_c(s, tol)?;
    let d = conj_sqrt(&c, tol)?;
    let m = s.len();
    let n = s.dim();

    let mut pairs = Vec::with_capacity(m);
    for k in 0..m {
        let mut a = DMatrix::<Complex64>::zeros(n, n);
        let mut b = DMatrix::<Complex64>::zeros(n, n);
        for j in 0..m {
            a += s.pairs()[j].0.matrix().map(|z| z * d.entry(k, j).conj());
            b += s.pairs()[j].1.matrix().map(|z| z * d.entry(j, k));
        }
        pairs.push(balance_pair(CMat::from_inner(a), CMat::from_inner(b)));
    }
    let out = OpSum::new(n, pairs)?;
    verify_hermitian_rewrite(s, &out, tol, 1e-8)?;
    Ok(out)
}

/// The 2m-summand fallback: Hermitian/skew split of every pair, zero terms
/// dropped, then real-coefficient elimination until both families are
/// linearly independent.
pub fn hermitize_doubling(s: &OpSum, tol: &Tol) -> Result<OpSum> {
    let n = s.dim();
    let half = c64(0.5, 0.0);
    let half_i = c64(0.0, 0.5); // 1/(-2i) = i/2
    let neg_half_i = c64(0.0, -0.5); // 1/(2i) = -i/2

    let scale = s
        .pairs()
        .iter()
        .map(|(e, f)| e.norm_fro().max(f.norm_fro()))
        .fold(0.0f64, f64::max);
    let zero_cut = tol.zero * rel(scale);

    let mut pairs: Vec<(CMat, CMat)> = Vec::with_capacity(2 * s.len());
    for (e, f) in s.pairs() {
        let he = e.add(&e.adjoint()).scale(half);
        let hf = f.add(&f.adjoint()).scale(half);
        let se = e.sub(&e.adjoint()).scale(half_i);
        let sf = f.sub(&f.adjoint()).scale(neg_half_i);
        for (a, b) in [(he, hf), (se, sf)] {
            if a.norm_fro() > zero_cut && b.norm_fro() > zero_cut {
                pairs.push(balance_pair(a, b));
            }
        }
    }

    eliminate_dependent_pairs(&mut pairs, tol);
    let out = OpSum::new(n, pairs)?;
    verify_hermitian_rewrite(s, &out, tol, 1e-9)?;
    Ok(out)
}

/// Split the scalar mass so ‖A‖_F = ‖B‖_F within the pair.
fn balance_pair(a: CMat, b: CMat) -> (CMat, CMat) {
    let (na, nb) = (a.norm_fro(), b.norm_fro());
    if na == 0.0 || nb == 0.0 {
        return (a, b);
    }
    let s = (nb / na).sqrt();
    (a.scale_re(s), b.scale_re(1.0 / s))
}

/// Hermitian matrices form a real vector space; a complex-dependent Hermitian
/// family always has a real dependency, which can be eliminated by absorbing
/// one pair into the others with real coefficients — preserving both the map
/// and the Hermitian property. Alternates between the A- and B-sides until
/// both families are independent.
fn eliminate_dependent_pairs(pairs: &mut Vec<(CMat, CMat)>, tol: &Tol) {
    loop {
        if pairs.is_empty() {
            return;
        }
        let a_fam: Vec<CMat> = pairs.iter().map(|(a, _)| a.clone()).collect();
        if let Some(w) = real_null_vector(&a_fam, tol) {
            absorb(pairs, &w, Side::A);
            continue;
        }
        let b_fam: Vec<CMat> = pairs.iter().map(|(_, b)| b.clone()).collect();
        if let Some(w) = real_null_vector(&b_fam, tol) {
            absorb(pairs, &w, Side::B);
            continue;
        }
        return;
    }
}

enum Side {
    A,
    B,
}

/// Real coefficients w with Σ wⱼ Hⱼ ≈ 0, if the Hermitian family is
/// dependent over the reals; None when independent. The coordinates are the
/// diagonal plus √2-weighted real/imaginary parts of the strict upper
/// triangle (an isometry up to scaling); the null direction comes from the
/// m×m real Gram matrix, which exposes the null space even when m exceeds
/// the ambient dimension n².
fn real_null_vector(family: &[CMat], tol: &Tol) -> Option<Vec<f64>> {
    let m = family.len();
    let n = family[0].dim();
    let upper: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let rows = n + 2 * upper.len(); // = n²
    let root2 = std::f64::consts::SQRT_2;
    let stack = DMatrix::<f64>::from_fn(rows, m, |r, j| {
        let h = &family[j];
        if r < n {
            h.get(r, r).re
        } else if r < n + upper.len() {
            let (i, k) = upper[r - n];
            h.get(i, k).re * root2
        } else {
            let (i, k) = upper[r - n - upper.len()];
            h.get(i, k).im * root2
        }
    });
    let gram = stack.transpose() * &stack; // m×m, eigenvalues are σ²
    let se = gram.symmetric_eigen();
    let (kmin, &lmin) = se
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
    let lmax = se.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
    if lmax == 0.0 || lmin.max(0.0).sqrt() <= tol.lin_indep * lmax.sqrt() {
        Some(se.eigenvectors.column(kmin).iter().copied().collect())
    } else {
        None
    }
}

/// Remove the pair with the largest |wⱼ| by substituting its dependency into
/// the opposite side of the remaining pairs.
fn absorb(pairs: &mut Vec<(CMat, CMat)>, w: &[f64], side: Side) {
    let (star, _) = w
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .expect("nonempty");
    let w_star = w[star];
    let removed_pair = pairs.remove(star);
    let carried = match side {
        Side::A => removed_pair.1,
        Side::B => removed_pair.0,
    };
    for (j, p) in pairs.iter_mut().enumerate() {
        let jj = if j < star { j } else { j + 1 };
        let coeff = -w[jj] / w_star;
        if coeff == 0.0 {
            continue;
        }
        match side {
            Side::A => p.1 = p.1.add(&carried.scale_re(coeff)),
            Side::B => p.0 = p.0.add(&carried.scale_re(coeff)),
        }
    }
}

fn verify_hermitian_rewrite(
    original: &OpSum,
    rewritten: &OpSum,
    tol: &Tol,
    resid_tol: f64,
) -> Result<()> {
    for (k, (a, b)) in rewritten.pairs().iter().enumerate() {
        for (tag, m) in [("A", a), ("B", b)] {
            let defect = m.herm_defect();
            if defect > tol.herm * rel(m.norm_fro()) {
                return Err(Error::HermitizeVerify(format!(
                    "pair {k} side {tag}: Hermitian defect {defect:.3e}"
                )));
            }
        }
    }
    let dist = unit_apply_distance(original, rewritten)?;
    let scale = rel(original.unit_image_scale());
    if dist > resid_tol * scale {
        return Err(Error::HermitizeVerify(format!(
            "apply-equivalence residual {dist:.3e} exceeds {:.3e}",
            resid_tol * scale
        )));
    }
    let a_fam: Vec<CMat> = rewritten.pairs().iter().map(|(a, _)| a.clone()).collect();
    let b_fam: Vec<CMat> = rewritten.pairs().iter().map(|(_, b)| b.clone()).collect();
    if independence_ratio(&a_fam) <= tol.lin_indep || independence_ratio(&b_fam) <= tol.lin_indep {
        return Err(Error::HermitizeVerify(
            "output families not linearly independent".into(),
        ));
    }
    Ok(())
}
