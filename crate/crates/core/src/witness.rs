//! The ε-map counterexample and related executable oracles.
//!
//! The map on M₂(ℂ)
//!
//! ```text
//!   (x y; w z) ↦ (x + (1−ε)z, εy; εw, z + (1−ε)x)
//! ```
//!
//! is self-adjoint and positive-definite for every ε ∈ (0, 1), yet for
//! ε < ½ it admits no decomposition Σ AᵢXBᵢ with all matrices positive:
//! writing out the images of the matrix units forces Σαᵢβᵢ′ = ε and
//! Σγᵢconj(γᵢ′) = 1−ε, and the AM–GM inequality chains these into
//! ε ≥ 1−ε. [`obstruction_audit`] replays that argument numerically against
//! any candidate decomposition and reports the first failing step.
//!
//! [`fs_zero_test`] and [`fs_dependent_test`] check the two zero-map
//! equivalences for sums Σ AⱼXBⱼ (independent and dependent B-family cases)
//! as identities on the supermatrix. [`paper_decompositions`] provides the
//! explicit Hermitian and (for ε = ¼) minus-one-sign forms as golden data.

use crate::config::{rel, Tol};
use crate::error::{Error, Result};
use crate::matspace::{c64, min_eig_hermitian, CMat, Complex64};
use crate::positivize::{CertForm, Certificate, ShiftLedger};
use crate::superop::{independence_ratio, unit_apply_distance, OpSum, SuperMat};

/// The ε-map with its operator-sum and supermatrix representations.
///
/// ε may lie anywhere in (0, 1) for experimentation; the no-all-positive
/// obstruction applies to ε < ½ only.
#[derive(Debug, Clone)]
pub struct EpsilonMap {
    epsilon: f64,
    opsum: OpSum,
    supermat: SuperMat,
}

impl EpsilonMap {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn opsum(&self) -> &OpSum {
        &self.opsum
    }

    pub fn supermat(&self) -> &SuperMat {
        &self.supermat
    }

    /// Closed form (x y; w z) ↦ (x+(1−ε)z, εy; εw, z+(1−ε)x).
    pub fn closed_form(&self, x: &CMat) -> Result<CMat> {
        if x.dim() != 2 {
            return Err(Error::DimMismatch("ε-map acts on 2x2 matrices".into()));
        }
        let e = self.epsilon;
        let (xx, yy, ww, zz) = (x.get(0, 0), x.get(0, 1), x.get(1, 0), x.get(1, 1));
        CMat::from_rows(
            2,
            &[
                xx + zz * c64(1.0 - e, 0.0),
                yy * c64(e, 0.0),
                ww * c64(e, 0.0),
                zz + xx * c64(1.0 - e, 0.0),
            ],
        )
    }
}

/// The four matrix-unit pairs of the ε-map:
/// (diag(1,ε), E₁₁), ((1−ε)E₁₂, E₂₁), ((1−ε)E₂₁, E₁₂), (diag(ε,1), E₂₂).
pub fn counterexample_map(epsilon: f64, tol: &Tol) -> Result<EpsilonMap> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !epsilon.is_finite() {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let e = epsilon;
    let pairs = vec![
        (CMat::real_diag(&[1.0, e]), CMat::matrix_unit(2, 0, 0)),
        (CMat::matrix_unit(2, 0, 1).scale_re(1.0 - e), CMat::matrix_unit(2, 1, 0)),
        (CMat::matrix_unit(2, 1, 0).scale_re(1.0 - e), CMat::matrix_unit(2, 0, 1)),
        (CMat::real_diag(&[e, 1.0]), CMat::matrix_unit(2, 1, 1)),
    ];
    let opsum = OpSum::new(2, pairs)?;
    let supermat = opsum.to_supermat();
    let map = EpsilonMap { epsilon, opsum, supermat };

    // The operator sum must reproduce the closed form exactly on the units.
    let _ = tol;
    for i in 0..2 {
        for j in 0..2 {
            let u = CMat::matrix_unit(2, i, j);
            let dev = map.opsum.apply(&u)?.sub(&map.closed_form(&u)?).norm_fro();
            debug_assert!(dev == 0.0, "unit image deviates by {dev}");
        }
    }
    Ok(map)
}

/// ⟨𝒜(X), X⟩ in closed form: ε·Σ|entries|² + (1−ε)|x+z|².
pub fn quadratic_form(map: &EpsilonMap, x: &CMat) -> f64 {
    let e = map.epsilon;
    let sum_sq: f64 = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| x.get(i, j).norm_sqr())
        .sum();
    let diag = x.get(0, 0) + x.get(1, 1);
    e * sum_sq + (1.0 - e) * diag.norm_sqr()
}

/// Steps of the obstruction audit, in verification order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditStep {
    /// Every Aᵢ, Bᵢ Hermitian and positive.
    Positivity,
    /// Candidate reproduces the ε-map on all matrix units.
    Reconstruction,
    /// Entry bookkeeping: Σαᵢβᵢ′ = ε, Σβᵢαᵢ′ = ε, Σγᵢconj(γᵢ′) = 1−ε.
    EntryBookkeeping,
    /// AM–GM chain ε ≥ Σ|γᵢ||γᵢ′| ≥ |Σγᵢconj(γᵢ′)| = 1−ε.
    AmGmChain,
}

impl AuditStep {
    pub fn name(&self) -> &'static str {
        match self {
            AuditStep::Positivity => "positivity",
            AuditStep::Reconstruction => "reconstruction",
            AuditStep::EntryBookkeeping => "entry_bookkeeping",
            AuditStep::AmGmChain => "am_gm_chain",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuditStepResult {
    pub step: AuditStep,
    pub passed: bool,
    pub detail: String,
}

/// Ordered, first-failure report of the obstruction audit.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub epsilon: f64,
    pub steps: Vec<AuditStepResult>,
    pub first_failure: Option<AuditStep>,
    /// Set when every step passed although ε < ½ — impossible if the
    /// arithmetic were exact, so it flags a numerical inconsistency.
    pub numerically_inconsistent: bool,
    /// The chain endpoints ε vs 1−ε, for display.
    pub eps_vs_complement: (f64, f64),
}

/// Replay the no-all-positive argument against a candidate decomposition of
/// the ε-map. Steps run in order and the first failure is recorded; later
/// steps are still evaluated for the report.
pub fn obstruction_audit(
    candidate: &[(CMat, CMat)],
    epsilon: f64,
    tol: &Tol,
) -> Result<AuditReport> {
    if candidate.iter().any(|(a, b)| a.dim() != 2 || b.dim() != 2) {
        return Err(Error::DimMismatch("obstruction audit is specific to dimension 2".into()));
    }
    if candidate.is_empty() {
        return Err(Error::DimMismatch("candidate must have at least one pair".into()));
    }
    let map = counterexample_map(epsilon, tol)?;
    let mut steps = Vec::new();

    // Step 1: positivity of every factor.
    let mut worst_margin = f64::INFINITY;
    let mut herm_ok = true;
    for (a, b) in candidate {
        for m in [a, b] {
            herm_ok &= m.herm_defect() <= tol.herm * rel(m.norm_fro());
            let margin = min_eig_hermitian(m) - tol.pos_margin * rel(m.norm_op());
            worst_margin = worst_margin.min(margin);
        }
    }
    let pos_ok = herm_ok && worst_margin > 0.0;
    steps.push(AuditStepResult {
        step: AuditStep::Positivity,
        passed: pos_ok,
        detail: format!("worst positivity margin {worst_margin:.3e}, hermitian: {herm_ok}"),
    });

    // Step 2: reconstruction on the matrix units.
    let cand_sum = OpSum::new(2, candidate.to_vec())?;
    let dist = unit_apply_distance(&cand_sum, map.opsum())?;
    let recon_bound = 1e-8 * rel(map.opsum().unit_image_scale());
    let recon_ok = dist <= recon_bound;
    steps.push(AuditStepResult {
        step: AuditStep::Reconstruction,
        passed: recon_ok,
        detail: format!("max unit deviation {dist:.3e} (bound {recon_bound:.3e})"),
    });

    // Step 3: entry bookkeeping. Aᵢ = (αᵢ γᵢ; conj(γᵢ) βᵢ), Bᵢ likewise primed.
    let alphas: Vec<f64> = candidate.iter().map(|(a, _)| a.get(0, 0).re).collect();
    let betas: Vec<f64> = candidate.iter().map(|(a, _)| a.get(1, 1).re).collect();
    let gammas: Vec<Complex64> = candidate.iter().map(|(a, _)| a.get(0, 1)).collect();
    let alphas_p: Vec<f64> = candidate.iter().map(|(_, b)| b.get(0, 0).re).collect();
    let betas_p: Vec<f64> = candidate.iter().map(|(_, b)| b.get(1, 1).re).collect();
    let gammas_p: Vec<Complex64> = candidate.iter().map(|(_, b)| b.get(0, 1)).collect();

    let sum_ab: f64 = alphas.iter().zip(&betas_p).map(|(a, b)| a * b).sum();
    let sum_ba: f64 = betas.iter().zip(&alphas_p).map(|(a, b)| a * b).sum();
    let sum_gg: Complex64 = gammas
        .iter()
        .zip(&gammas_p)
        .map(|(g, gp)| g * gp.conj())
        .sum();
    let book_ok = (sum_ab - epsilon).abs() <= tol.audit
        && (sum_ba - epsilon).abs() <= tol.audit
        && (sum_gg - c64(1.0 - epsilon, 0.0)).norm() <= tol.audit;
    steps.push(AuditStepResult {
        step: AuditStep::EntryBookkeeping,
        passed: book_ok,
        detail: format!(
            "Σαβ′ = {sum_ab:.6} (ε = {epsilon}), Σβα′ = {sum_ba:.6}, Σγconj(γ′) = {:.6}+{:.6}i (1−ε = {})",
            sum_gg.re,
            sum_gg.im,
            1.0 - epsilon
        ),
    });

    // Step 4: the AM–GM chain. Links hold by arithmetic whenever step 1
    // passed; the final comparison ε ≥ 1−ε is the obstruction.
    let c1: f64 = alphas
        .iter()
        .zip(&betas_p)
        .zip(betas.iter().zip(&alphas_p))
        .map(|((a, bp), (b, ap))| (a * bp + b * ap) / 2.0)
        .sum();
    let c2: f64 = alphas
        .iter()
        .zip(&betas_p)
        .zip(betas.iter().zip(&alphas_p))
        .map(|((a, bp), (b, ap))| (a * bp * b * ap).max(0.0).sqrt())
        .sum();
    let c3: f64 = gammas
        .iter()
        .zip(&gammas_p)
        .map(|(g, gp)| g.norm() * gp.norm())
        .sum();
    let c4 = sum_gg.norm();
    let links_ok =
        c1 >= c2 - tol.audit && c2 >= c3 - tol.audit && c3 >= c4 - tol.audit;
    let conclusion_ok = epsilon + tol.audit >= 1.0 - epsilon;
    let chain_ok = links_ok && conclusion_ok;
    steps.push(AuditStepResult {
        step: AuditStep::AmGmChain,
        passed: chain_ok,
        detail: format!(
            "chain {c1:.6} ≥ {c2:.6} ≥ {c3:.6} ≥ {c4:.6}; conclusion ε ≥ 1−ε reads {:.6} ≥ {:.6} ({})",
            epsilon,
            1.0 - epsilon,
            if conclusion_ok { "holds" } else { "violated — no all-positive form" }
        ),
    });

    let first_failure = steps.iter().find(|s| !s.passed).map(|s| s.step);
    let numerically_inconsistent = first_failure.is_none() && epsilon < 0.5;
    Ok(AuditReport {
        epsilon,
        steps,
        first_failure,
        numerically_inconsistent,
        eps_vs_complement: (epsilon, 1.0 - epsilon),
    })
}

/// Two-sided zero-map report: the supermatrix norm of Φ and the norm of the
/// family condition, with the equivalence verdict.
#[derive(Debug, Clone)]
pub struct FsReport {
    pub phi_norm: f64,
    pub condition_norm: f64,
    pub phi_is_zero: bool,
    pub condition_holds: bool,
    pub equivalent: bool,
}

/// For linearly independent {Bⱼ}: Φ = Σ AⱼXBⱼ is the zero map iff every
/// Aⱼ = 0. Both sides are evaluated numerically and compared.
pub fn fs_zero_test(a_list: &[CMat], b_list: &[CMat], tol: &Tol) -> Result<FsReport> {
    if a_list.len() != b_list.len() || a_list.is_empty() {
        return Err(Error::DimMismatch("A and B lists must be nonempty and equal length".into()));
    }
    if independence_ratio(b_list) <= tol.lin_indep {
        return Err(Error::DependentFamily);
    }
    let n = a_list[0].dim();
    let pairs: Vec<(CMat, CMat)> = a_list.iter().cloned().zip(b_list.iter().cloned()).collect();
    let phi = OpSum::new(n, pairs)?;
    let phi_norm = phi.to_supermat().mat().norm_fro();
    let condition_norm = a_list.iter().map(|a| a.norm_fro()).fold(0.0f64, f64::max);

    let scale = rel(
        a_list.iter().map(|a| a.norm_fro()).fold(0.0f64, f64::max)
            * b_list.iter().map(|b| b.norm_fro()).fold(0.0f64, f64::max),
    );
    let phi_is_zero = phi_norm <= 1e-9 * scale;
    let condition_holds = condition_norm <= 1e-9 * scale;
    Ok(FsReport {
        phi_norm,
        condition_norm,
        phi_is_zero,
        condition_holds,
        equivalent: phi_is_zero == condition_holds,
    })
}

/// Dependent-family version: with B₁…B_s independent and
/// Bⱼ = Σ_{k≤s} c_{k,j}Bₖ for j > s, Φ ≡ 0 iff Aₖ = −Σ_{j>s} c_{k,j}Aⱼ for
/// every k ≤ s. `coeffs[k][j]` is c_{k+1, s+1+j} (0-based storage).
pub fn fs_dependent_test(
    a_list: &[CMat],
    b_list: &[CMat],
    s: usize,
    coeffs: &[Vec<Complex64>],
    tol: &Tol,
) -> Result<FsReport> {
    let m = a_list.len();
    if b_list.len() != m || m == 0 {
        return Err(Error::MalformedDependency("A and B lists must be nonempty and equal length".into()));
    }
    if s == 0 || s >= m {
        return Err(Error::MalformedDependency(format!("need 1 ≤ s < m, got s = {s}, m = {m}")));
    }
    if coeffs.len() != s || coeffs.iter().any(|row| row.len() != m - s) {
        return Err(Error::MalformedDependency(format!(
            "coefficient matrix must be {s}×{}",
            m - s
        )));
    }
    if independence_ratio(&b_list[..s]) <= tol.lin_indep {
        return Err(Error::MalformedDependency("leading B-family not independent".into()));
    }
    // Verify the claimed dependency Bⱼ = Σ c_{k,j} Bₖ.
    let n = a_list[0].dim();
    let b_scale = b_list.iter().map(|b| b.norm_fro()).fold(0.0f64, f64::max);
    for j in s..m {
        let mut acc = CMat::zeros(n);
        for k in 0..s {
            acc = acc.add(&b_list[k].scale(coeffs[k][j - s]));
        }
        let dev = acc.sub(&b_list[j]).norm_fro();
        if dev > 1e-9 * rel(b_scale) {
            return Err(Error::MalformedDependency(format!(
                "B_{} deviates from its claimed span by {dev:.3e}",
                j + 1
            )));
        }
    }

    let pairs: Vec<(CMat, CMat)> = a_list.iter().cloned().zip(b_list.iter().cloned()).collect();
    let phi = OpSum::new(n, pairs)?;
    let phi_norm = phi.to_supermat().mat().norm_fro();

    // Condition: Aₖ + Σ_{j>s} c_{k,j}Aⱼ ≈ 0 for all k ≤ s.
    let mut condition_norm = 0.0f64;
    for k in 0..s {
        let mut acc = a_list[k].clone();
        for j in s..m {
            acc = acc.add(&a_list[j].scale(coeffs[k][j - s]));
        }
        condition_norm = condition_norm.max(acc.norm_fro());
    }

    let scale = rel(a_list.iter().map(|a| a.norm_fro()).fold(0.0f64, f64::max) * b_scale);
    let phi_is_zero = phi_norm <= 1e-9 * scale;
    let condition_holds = condition_norm <= 1e-9 * scale;
    Ok(FsReport {
        phi_norm,
        condition_norm,
        phi_is_zero,
        condition_holds,
        equivalent: phi_is_zero == condition_holds,
    })
}

/// The explicit decompositions displayed for the ε-map: the four-term
/// Hermitian form (any ε), and for ε = ¼ the 1/32-scaled minus-one-sign
/// certificate.
#[derive(Debug, Clone)]
pub struct PaperForms {
    pub hermitian_form: OpSum,
    pub minus_one_form: Option<Certificate>,
}

pub fn paper_decompositions(epsilon: f64, tol: &Tol) -> Result<PaperForms> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !epsilon.is_finite() {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let e = epsilon;
    let m2 = CMat::from_rows(2, &[c64(0.0, 0.0), c64(0.5, -0.5), c64(0.5, 0.5), c64(0.0, 0.0)])?;
    let m3 = m2.conj();
    let hermitian_form = OpSum::new(
        2,
        vec![
            (CMat::real_diag(&[1.0, e]), CMat::matrix_unit(2, 0, 0)),
            (m2.scale_re(1.0 - e), m2.clone()),
            (m3.scale_re(1.0 - e), m3),
            (CMat::real_diag(&[e, 1.0]), CMat::matrix_unit(2, 1, 1)),
        ],
    )?;

    let minus_one_form = if (epsilon - 0.25).abs() < 1e-12 {
        let map = counterexample_map(epsilon, tol)?;
        let s = 1.0 / 32.0;
        let a1 = CMat::from_real_rows(2, &[1.0, 2.0, 2.0, 16.0])?.scale_re(s);
        let b1 = CMat::from_real_rows(2, &[279.0, 48.0, 48.0, 36.0])?;
        let a2 = CMat::from_rows(
            2,
            &[c64(3.0, 0.0), c64(9.0, -1.0), c64(9.0, 1.0), c64(56.0, 0.0)],
        )?
        .scale_re(s);
        let b2 = CMat::from_rows(
            2,
            &[c64(31.0, 0.0), c64(6.0, -6.0), c64(6.0, 6.0), c64(4.0, 0.0)],
        )?;
        let a3 = a2.conj();
        let b3 = b2.conj();
        let a4 = CMat::from_real_rows(2, &[1.0, 0.0, 0.0, 8.0])?.scale_re(s);
        let b4 = CMat::from_real_rows(2, &[125.0, 12.0, 12.0, 20.0])?;
        let pairs = OpSum::new(2, vec![(a1, b1), (a2, b2), (a3, b3), (a4, b4)])?;
        Some(Certificate::new_verified(
            CertForm::MinusOne,
            pairs,
            vec![-1, 1, 1, 1],
            ShiftLedger::default(),
            map.opsum(),
            tol,
        )?)
    } else {
        None
    };

    Ok(PaperForms { hermitian_form, minus_one_form })
}
