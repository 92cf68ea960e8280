//! End-to-end decomposition driver shared by the CLI and the test suites.
//!
//! Validates that a map defines an inner product, reduces it to independent
//! families, rewrites with Hermitian pairs (falling back from the square-root
//! construction to summand doubling when the logarithm is numerically
//! unavailable), and pushes on to the requested positive form.

use crate::config::Tol;
use crate::error::{Error, Result};
use crate::hermitize::{hermitize, hermitize_doubling};
use crate::positivize::{
    minus_one_form, positivize_single, positivize_two, try_all_positive, CertForm, Certificate,
    ConditionReport, ShiftLedger, UpgradeOutcome,
};
use crate::superop::OpSum;

/// Which hermitization route produced the pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermitizeRoute {
    /// Conjugate square root of the involution (same summand count).
    Direct,
    /// Hermitian/skew splitting with up to 2m summands.
    Doubling,
}

/// Hermitize with the documented fallback policy: the square-root route is
/// attempted first; any branch/logarithm/verification failure switches to
/// doubling. Genuine input errors (not self-adjoint, not reduced) propagate.
pub fn hermitize_with_fallback(s: &OpSum, tol: &Tol) -> Result<(OpSum, HermitizeRoute)> {
    match hermitize(s, tol) {
        Ok(h) => Ok((h, HermitizeRoute::Direct)),
        Err(e) if fallback_worthy(&e) => {
            let h = hermitize_doubling(s, tol)?;
            Ok((h, HermitizeRoute::Doubling))
        }
        Err(e) => Err(e),
    }
}

fn fallback_worthy(e: &Error) -> bool {
    matches!(
        e,
        Error::NotConjInvolution { .. }
            | Error::SchurFailed
            | Error::Singular
            | Error::BranchCutExhausted { .. }
            | Error::SkewCheckFailed { .. }
            | Error::ConjSqrtDefect { .. }
            | Error::HermitizeVerify(_)
            | Error::Numerical(_)
    )
}

/// Decomposition target of a pipeline run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecomposeTarget {
    OperatorSum,
    Hermitian,
    Positive,
    MinusOne,
    Auto,
}

/// Result of a pipeline run. `achieved_requested` is false exactly when a
/// positive form was requested but only the minus-one form was reached; the
/// certificate then carries the minus-one decomposition and `report` the
/// condition report of the failed upgrade.
#[derive(Debug, Clone)]
pub struct DecomposeOutcome {
    pub certificate: Certificate,
    pub route: Option<HermitizeRoute>,
    pub report: Option<ConditionReport>,
    pub achieved_requested: bool,
}

/// Run the pipeline up to `target`. The input map must define an inner
/// product (self-adjoint, positive definite); residuals in the emitted
/// certificate are measured against `map` itself.
pub fn decompose(map: &OpSum, target: DecomposeTarget, tol: &Tol) -> Result<DecomposeOutcome> {
    let (pd, min_eig) = map.is_positive_definite(tol)?;
    if !pd {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    let reduced = map.reduce(tol)?;
    if reduced.is_zero() {
        return Err(Error::ZeroMap);
    }

    if target == DecomposeTarget::OperatorSum {
        let signs = vec![1i8; reduced.len()];
        let cert = Certificate::new_verified(
            CertForm::OperatorSum,
            reduced,
            signs,
            ShiftLedger::default(),
            map,
            tol,
        )?;
        return Ok(DecomposeOutcome {
            certificate: cert,
            route: None,
            report: None,
            achieved_requested: true,
        });
    }

    let (herm, route) = hermitize_with_fallback(&reduced, tol)?;
    if target == DecomposeTarget::Hermitian {
        let signs = vec![1i8; herm.len()];
        let cert = Certificate::new_verified(
            CertForm::Hermitian,
            herm,
            signs,
            ShiftLedger::default(),
            map,
            tol,
        )?;
        return Ok(DecomposeOutcome {
            certificate: cert,
            route: Some(route),
            report: None,
            achieved_requested: true,
        });
    }

    // Positive family of targets. Single summands positivize exactly; two
    // summands always reach the all-positive form; beyond that the minus-one
    // form always exists and the upgrade is conditional.
    let m = herm.len();
    let outcome = if m == 1 {
        let mut cert = positivize_single(&herm, tol)?;
        cert.recompute(map, tol)?;
        DecomposeOutcome {
            certificate: cert,
            route: Some(route),
            report: None,
            achieved_requested: true,
        }
    } else if m == 2 {
        let mut cert = positivize_two(&herm, tol)?;
        cert.recompute(map, tol)?;
        DecomposeOutcome {
            certificate: cert,
            route: Some(route),
            report: None,
            achieved_requested: true,
        }
    } else {
        let mut minus = minus_one_form(&herm, tol)?;
        minus.recompute(map, tol)?;
        if target == DecomposeTarget::MinusOne {
            DecomposeOutcome {
                certificate: minus,
                route: Some(route),
                report: None,
                achieved_requested: true,
            }
        } else {
            match try_all_positive(&minus, map, tol)? {
                UpgradeOutcome::Upgraded(cert) => DecomposeOutcome {
                    certificate: cert,
                    route: Some(route),
                    report: None,
                    achieved_requested: true,
                },
                UpgradeOutcome::Report(report) => {
                    // Auto accepts the strongest achieved form; an explicit
                    // positive request records the miss.
                    let achieved = target == DecomposeTarget::Auto;
                    DecomposeOutcome {
                        certificate: minus,
                        route: Some(route),
                        report: Some(report),
                        achieved_requested: achieved,
                    }
                }
            }
        }
    };
    Ok(outcome)
}
