//! Centralized tolerance configuration.
//!
//! All numerical thresholds in the crate are relative to input scale and live
//! in one [`Tol`] record so they can be scaled uniformly (the CLI exposes this
//! through the `IPFACTOR_TOL` environment variable).

/// Tolerances used throughout the decomposition pipelines.
///
/// Every field is a relative threshold; the operation that consumes it
/// multiplies by the appropriate input scale (usually `max(1, ‖·‖)`).
#[derive(Debug, Clone, Copy)]
pub struct Tol {
    /// Hermitian defect bound: ‖H − H*‖_F ≤ herm · max(1, ‖H‖_F).
    pub herm: f64,
    /// Positivity margin: a matrix counts as positive when its smallest
    /// eigenvalue exceeds pos_margin · max(1, ‖H‖₂).
    pub pos_margin: f64,
    /// Eigendecomposition reconstruction bound, relative to max(1, ‖H‖_F).
    pub eig_recon: f64,
    /// Pencil eigenpair residual: ‖(P − t₀Q)y₀‖ ≤ pencil_residual · (‖P‖ + t₀‖Q‖).
    pub pencil_residual: f64,
    /// Round-trip bound for the branch-cut logarithm: ‖exp(L) − C‖_F.
    pub log_roundtrip: f64,
    /// Skew bound for the logarithm: ‖L + conj(L)‖_F ≤ skew · max(1, ‖L‖_F).
    pub skew: f64,
    /// Conjugate square root defects: ‖D² − C‖ and ‖D·conj(D) − I‖.
    pub conj_sqrt: f64,
    /// Conjugate involution defect: ‖C·conj(C) − I‖_F ≤ involution · m.
    pub involution: f64,
    /// Linear independence: smallest/largest singular value of a family
    /// stacking must exceed this ratio.
    pub lin_indep: f64,
    /// Singular value cutoff for the realignment rank, relative to σ_max.
    pub sv_cutoff: f64,
    /// Apply-equivalence of two representations of the same map.
    pub apply_equiv: f64,
    /// Self-adjointness defect threshold on the supermatrix.
    pub self_adjoint: f64,
    /// Positive-definiteness eigenvalue threshold, relative to ‖M‖₂.
    pub pos_def: f64,
    /// Least-squares residual for expressing adjoints in a family's span.
    pub residual_fit: f64,
    /// Cross-check bound for the F-side involution relation.
    pub cross_check: f64,
    /// Certificate apply-residual bound, relative to map scale.
    pub cert_residual: f64,
    /// Relative margin δ added on top of exact spectral shift bounds.
    pub shift_margin: f64,
    /// Minimum angular clearance between eigenvalues and the log branch cut.
    pub cut_clearance: f64,
    /// Entry-bookkeeping tolerance in the obstruction audit.
    pub audit: f64,
    /// Norm threshold below which a map or family member counts as zero.
    pub zero: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            herm: 1e-10,
            pos_margin: 1e-10,
            eig_recon: 1e-9,
            pencil_residual: 1e-8,
            log_roundtrip: 1e-8,
            skew: 1e-7,
            conj_sqrt: 1e-7,
            involution: 1e-8,
            lin_indep: 1e-8,
            sv_cutoff: 1e-9,
            apply_equiv: 1e-10,
            self_adjoint: 1e-8,
            pos_def: 1e-10,
            residual_fit: 1e-8,
            cross_check: 1e-7,
            cert_residual: 1e-8,
            shift_margin: 1e-6,
            cut_clearance: 1e-6,
            audit: 1e-8,
            zero: 1e-9,
        }
    }
}

impl Tol {
    /// Scale every tolerance by `factor` (> 0). `shift_margin` is left alone:
    /// it is a constructive margin, not an acceptance threshold, and shrinking
    /// it would loosen nothing.
    pub fn scaled(self, factor: f64) -> Self {
        assert!(factor > 0.0 && factor.is_finite(), "tolerance scale must be positive");
        Tol {
            herm: self.herm * factor,
            pos_margin: self.pos_margin * factor,
            eig_recon: self.eig_recon * factor,
            pencil_residual: self.pencil_residual * factor,
            log_roundtrip: self.log_roundtrip * factor,
            skew: self.skew * factor,
            conj_sqrt: self.conj_sqrt * factor,
            involution: self.involution * factor,
            lin_indep: self.lin_indep * factor,
            sv_cutoff: self.sv_cutoff * factor,
            apply_equiv: self.apply_equiv * factor,
            self_adjoint: self.self_adjoint * factor,
            pos_def: self.pos_def * factor,
            residual_fit: self.residual_fit * factor,
            cross_check: self.cross_check * factor,
            cert_residual: self.cert_residual * factor,
            shift_margin: self.shift_margin,
            cut_clearance: self.cut_clearance,
            audit: self.audit * factor,
            zero: self.zero * factor,
        }
    }
}

/// `max(1, x)` — the scale factor used by relative tolerances.
pub(crate) fn rel(x: f64) -> f64 {
    x.max(1.0)
}
