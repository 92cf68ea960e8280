//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("entries must be finite: {0}")]
    NonFinite(String),

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {bound:.3e}")]
    NotHermitian { defect: f64, bound: f64 },

    #[error("matrix is not positive: smallest eigenvalue {min_eig:.3e} below margin {margin:.3e}")]
    NotPositive { min_eig: f64, margin: f64 },

    #[error("map is not self-adjoint: supermatrix defect {defect:.3e}")]
    NotSelfAdjoint { defect: f64 },

    #[error("map is not positive-definite: smallest supermatrix eigenvalue {min_eig:.3e}")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("Cholesky factorization failed (matrix not positive definite)")]
    CholeskyFailed,

    #[error("Schur decomposition did not converge")]
    SchurFailed,

    #[error("matrix is singular or too ill-conditioned to invert")]
    Singular,

    #[error("matrix does not satisfy C·conj(C) = I: defect {defect:.3e} exceeds {bound:.3e}")]
    NotConjInvolution { defect: f64, bound: f64 },

    #[error("no branch cut avoided the spectrum, or every branch failed verification (last defect {last_defect:.3e})")]
    BranchCutExhausted { last_defect: f64 },

    #[error("logarithm failed the purely-imaginary check: defect {defect:.3e}")]
    SkewCheckFailed { defect: f64 },

    #[error("conjugate square root verification failed: {which} defect {defect:.3e}")]
    ConjSqrtDefect { which: &'static str, defect: f64 },

    #[error("least-squares residual {residual:.3e} exceeds {bound:.3e} (input not self-adjoint or not reduced)")]
    ResidualTooLarge { residual: f64, bound: f64 },

    #[error("F-side involution cross-check failed: defect {defect:.3e}")]
    CrossCheckFailed { defect: f64 },

    #[error("hermitized pairs failed verification: {0}")]
    HermitizeVerify(String),

    #[error("positivity probe failed: every probe vector annihilated the A-family")]
    ProbeFailed,

    #[error("back-off exhausted after {iterations} halvings: margin {margin:.3e} never positive")]
    BackoffExhausted { iterations: u32, margin: f64 },

    #[error("epsilon {0} outside the open interval (0, 1)")]
    EpsilonOutOfRange(f64),

    #[error("family is linearly dependent (use the dependent-family test)")]
    DependentFamily,

    #[error("malformed dependency data: {0}")]
    MalformedDependency(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("operation requires a nonzero map")]
    ZeroMap,

    #[error("internal numerical failure: {0}")]
    Numerical(String),
}
