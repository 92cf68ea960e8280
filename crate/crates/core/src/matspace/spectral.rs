//! Spectral computations: Hermitian eigendecompositions, definite pencils,
//! and Schur-based diagonalization of general complex matrices.

use nalgebra::{DMatrix, DVector};

use crate::config::{rel, Tol};
use crate::error::{Error, Result};
use crate::matspace::{c64, CMat, CVec, Complex64, HermMat, PosMat};

/// Result of [`herm_eig`]: H = V diag(λ) V* with λ ascending and V unitary.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: CMat,
}

/// Eigenvalues only, unsorted tolerance-free path for margin checks.
pub(crate) fn herm_eigenvalues(h: &CMat) -> Vec<f64> {
    let sym = (h.matrix() + h.matrix().adjoint()).map(|z| z * c64(0.5, 0.0));
    sym.symmetric_eigen().eigenvalues.iter().copied().collect()
}

/// Eigendecomposition of a certified Hermitian matrix.
///
/// Eigenvalues ascend; ties are broken by lexicographic comparison of the
/// phase-normalized eigenvectors, so the output is deterministic. The
/// reconstruction ‖VΛV* − H‖_F is verified against `tol.eig_recon`.
pub fn herm_eig(h: &HermMat, tol: &Tol) -> Result<HermEig> {
    let n = h.dim();
    let sym = (h.base().matrix() + h.base().matrix().adjoint()).map(|z| z * c64(0.5, 0.0));
    let se = sym.clone().symmetric_eigen();

    let mut cols: Vec<(f64, DVector<Complex64>)> = (0..n)
        .map(|k| {
            let v = CVec::from_inner(se.eigenvectors.column(k).into_owned()).normalized();
            (se.eigenvalues[k], v.vector().clone())
        })
        .collect();
    cols.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then_with(|| lex_cmp(&a.1, &b.1))
    });

    let eigenvalues: Vec<f64> = cols.iter().map(|(l, _)| *l).collect();
    let mut vmat = DMatrix::zeros(n, n);
    for (k, (_, v)) in cols.iter().enumerate() {
        vmat.set_column(k, v);
    }

    let lam = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        eigenvalues.iter().map(|&l| c64(l, 0.0)),
    ));
    let recon_err = (&vmat * lam * vmat.adjoint() - &sym).norm();
    let bound = tol.eig_recon * rel(h.base().norm_fro());
    if recon_err > bound {
        return Err(Error::Numerical(format!(
            "eigendecomposition reconstruction error {recon_err:.3e} exceeds {bound:.3e}"
        )));
    }

    Ok(HermEig { eigenvalues, eigenvectors: CMat::from_inner(vmat) })
}

fn lex_cmp(a: &DVector<Complex64>, b: &DVector<Complex64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// All generalized eigenvalues of the Hermitian pencil P x = t Q x, ascending.
///
/// Q must be positive; the pencil is reduced to an ordinary Hermitian problem
/// through the Cholesky factor of Q.
pub fn pencil_eigs(p: &HermMat, q: &PosMat) -> Result<Vec<f64>> {
    let (m, _) = whitened_pencil(p, q)?;
    let mut eigs = herm_eigenvalues(&CMat::from_inner(m));
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(eigs)
}

/// Smallest generalized eigenvalue t₀ of P x = t Q x and its eigenvector.
///
/// For positive P the returned t₀ is the exact point where P − tQ stops being
/// positive: P − tQ ≻ 0 for t ∈ [0, t₀) and P − t₀Q is singular. The
/// eigenvector is unit-norm with deterministic phase, and the residual
/// ‖(P − t₀Q)y₀‖ is checked against `tol.pencil_residual · (‖P‖ + t₀‖Q‖)`.
pub fn pencil_min(p: &HermMat, q: &PosMat, tol: &Tol) -> Result<(f64, CVec)> {
    let (m, l) = whitened_pencil(p, q)?;
    let her = HermMat::symmetrize(&CMat::from_inner(m), tol)?;
    let eig = herm_eig(&her, tol)?;
    let t0 = eig.eigenvalues[0];
    let z = eig.eigenvectors.matrix().column(0).into_owned();

    // Map back: y solves L* y = z.
    let lstar = l.adjoint();
    let y = lstar
        .solve_upper_triangular(&z)
        .ok_or(Error::Singular)?;
    let y0 = CVec::from_inner(y).normalized();

    let resid = (p.base().matrix() - q.base().matrix().map(|x| x * c64(t0, 0.0)))
        * y0.vector();
    let bound = tol.pencil_residual
        * rel(p.base().norm_fro() + t0.abs() * q.base().norm_fro());
    if resid.norm() > bound {
        return Err(Error::Numerical(format!(
            "pencil eigenpair residual {:.3e} exceeds {:.3e}",
            resid.norm(),
            bound
        )));
    }

    Ok((t0, y0))
}

/// Whiten the pencil: returns (L⁻¹ P L⁻*, L) with Q = L L*.
fn whitened_pencil(
    p: &HermMat,
    q: &PosMat,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch(format!("pencil: {} vs {}", p.dim(), q.dim())));
    }
    let chol = q.base().matrix().clone().cholesky().ok_or(Error::CholeskyFailed)?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(p.base().matrix())
        .ok_or(Error::Singular)?;
    // M = Y L⁻* = (L⁻¹ Y*)*.
    let z = l.solve_lower_triangular(&y.adjoint()).ok_or(Error::Singular)?;
    Ok((z.adjoint(), l))
}

/// Diagonalization C = V Λ V⁻¹ of a general complex matrix via its Schur
/// form, with eigenvectors of the triangular factor obtained by
/// back-substitution. Only the diagonalizable-within-tolerance case is
/// supported; ill-conditioned eigenbases surface as verification failures in
/// the callers.
pub(crate) struct GeneralEig {
    pub values: Vec<Complex64>,
    pub vectors: DMatrix<Complex64>,
    pub inverse: DMatrix<Complex64>,
}

pub(crate) fn general_eig(c: &CMat) -> Result<GeneralEig> {
    let n = c.dim();
    let schur = c
        .matrix()
        .clone()
        .try_schur(1e-13, 200_000)
        .ok_or(Error::SchurFailed)?;
    let (q, t) = schur.unpack();

    let w = triangular_eigvecs(&t);
    let vectors = &q * &w;
    let inverse = vectors.clone().try_inverse().ok_or(Error::Singular)?;
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    Ok(GeneralEig { values, vectors, inverse })
}

/// Eigenvectors of an upper-triangular matrix by back-substitution. Tiny
/// denominators (repeated eigenvalues) are clamped LAPACK-style; the result
/// is only trusted after the caller's round-trip verification.
fn triangular_eigvecs(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = t.nrows();
    let tn = t.norm();
    let smin = (f64::EPSILON * tn).max(1e-300);
    let mut v = DMatrix::zeros(n, n);
    for i in 0..n {
        let lam = t[(i, i)];
        let mut x = DVector::<Complex64>::zeros(n);
        x[i] = c64(1.0, 0.0);
        for j in (0..i).rev() {
            let mut s = c64(0.0, 0.0);
            for k in (j + 1)..=i {
                s += t[(j, k)] * x[k];
            }
            let mut den = t[(j, j)] - lam;
            if den.norm() < smin {
                den = c64(smin, 0.0);
            }
            x[j] = -s / den;
        }
        let nrm = x.norm();
        for k in 0..n {
            v[(k, i)] = x[k] / c64(nrm, 0.0);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn herm_eig_sorts_ascending() {
        let tol = Tol::default();
        let h = HermMat::new(CMat::real_diag(&[3.0, 1.0]), &tol).unwrap();
        let e = herm_eig(&h, &tol).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 3.0]);
    }

    #[test]
    fn herm_eig_pauli_x() {
        let tol = Tol::default();
        let h = HermMat::new(CMat::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap(), &tol).unwrap();
        let e = herm_eig(&h, &tol).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn herm_eig_vectors_unitary() {
        let tol = Tol::default();
        // Fixed random-ish Hermitian 3x3.
        let g = CMat::from_rows(
            3,
            &[
                c64(0.3, 0.1),
                c64(-0.7, 0.4),
                c64(0.2, -0.9),
                c64(1.1, 0.0),
                c64(0.5, -0.3),
                c64(-0.2, 0.6),
                c64(0.8, 0.2),
                c64(-0.4, -0.1),
                c64(0.9, 0.5),
            ],
        )
        .unwrap();
        let h = HermMat::symmetrize(&g, &tol).unwrap();
        let e = herm_eig(&h, &tol).unwrap();
        let v = e.eigenvectors.matrix();
        let defect = (v * v.adjoint() - DMatrix::<Complex64>::identity(3, 3)).norm();
        assert!(defect < 1e-10, "unitarity defect {defect}");
    }

    #[test]
    fn pencil_min_diagonal_case() {
        let tol = Tol::default();
        let p = HermMat::new(CMat::real_diag(&[2.0, 1.0]), &tol).unwrap();
        let q = PosMat::from_cmat(CMat::identity(2), &tol).unwrap();
        let (t0, y0) = pencil_min(&p, &q, &tol).unwrap();
        assert!((t0 - 1.0).abs() < 1e-12);
        assert!((y0.get(1).re - 1.0).abs() < 1e-10 && y0.get(0).norm() < 1e-10);
    }

    #[test]
    fn pencil_min_identity_ratio() {
        let tol = Tol::default();
        let base = CMat::from_real_rows(2, &[2.0, 0.5, 0.5, 1.0]).unwrap();
        let p = HermMat::new(base.clone(), &tol).unwrap();
        let q = PosMat::from_cmat(base, &tol).unwrap();
        let (t0, _) = pencil_min(&p, &q, &tol).unwrap();
        assert!((t0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pencil_min_scalar_ratios() {
        // P = diag(6,2), Q = diag(2,1): ratios 3 and 2, so t0 = 2 at e2.
        // Oracle: det(P - 2Q) must vanish.
        let tol = Tol::default();
        let p = HermMat::new(CMat::real_diag(&[6.0, 2.0]), &tol).unwrap();
        let q = PosMat::from_cmat(CMat::real_diag(&[2.0, 1.0]), &tol).unwrap();
        let (t0, y0) = pencil_min(&p, &q, &tol).unwrap();
        assert!((t0 - 2.0).abs() < 1e-12);
        assert!((y0.get(1).re - 1.0).abs() < 1e-10);
        let shifted = p.base().sub(&q.base().scale_re(t0));
        let det = shifted.get(0, 0) * shifted.get(1, 1) - shifted.get(0, 1) * shifted.get(1, 0);
        assert!(det.norm() < 1e-12);
    }
}
