//! Dense complex matrix and vector primitives.
//!
//! [`CMat`] is a square n×n complex matrix with finite entries; [`CVec`] the
//! matching column vector. [`HermMat`] and [`PosMat`] are certified
//! refinements: constructing one measures the Hermitian defect (resp. the
//! smallest eigenvalue) and fails if the invariant does not hold at the
//! configured tolerance. All values are immutable; every operation is a pure
//! function.

mod matfun;
mod spectral;

pub use matfun::{log_unit_conj, mat_exp};
pub use spectral::{herm_eig, pencil_eigs, pencil_min, HermEig};

use nalgebra::{DMatrix, DVector};

use crate::config::{rel, Tol};
use crate::error::{Error, Result};

/// Complex scalar used everywhere in this crate.
pub type Complex64 = num_complex::Complex<f64>;

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square n×n complex matrix with finite entries, n ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    inner: DMatrix<Complex64>,
}

impl CMat {
    /// Wrap a square nalgebra matrix, checking the type invariants.
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::DimMismatch(format!(
                "matrix must be square, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        if inner.nrows() == 0 {
            return Err(Error::DimMismatch("dimension must be at least 1".into()));
        }
        if !inner.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entry is NaN or infinite".into()));
        }
        Ok(CMat { inner })
    }

    /// Row-major construction from a flat slice of length n².
    pub fn from_rows(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    /// Row-major construction from real entries.
    pub fn from_real_rows(n: usize, entries: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = entries.iter().map(|&x| c64(x, 0.0)).collect();
        Self::from_rows(n, &v)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn zeros(n: usize) -> Self {
        CMat { inner: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        CMat { inner: DMatrix::identity(n, n) }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        CMat { inner: DMatrix::from_diagonal(&DVector::from_row_slice(entries)) }
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let v: Vec<Complex64> = entries.iter().map(|&x| c64(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// Matrix unit E_{ij} (1 at row i, column j; zero elsewhere).
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = c64(1.0, 0.0);
        CMat { inner: m }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    /// Borrow the underlying nalgebra matrix.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    /// Conjugate transpose M*.
    pub fn adjoint(&self) -> CMat {
        CMat { inner: self.inner.adjoint() }
    }

    /// Entrywise conjugate (no transpose).
    pub fn conj(&self) -> CMat {
        CMat { inner: self.inner.map(|z| z.conj()) }
    }

    pub fn transpose(&self) -> CMat {
        CMat { inner: self.inner.transpose() }
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        self.inner.diagonal().sum()
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat { inner: self.inner.map(|z| z * s) }
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(c64(s, 0.0))
    }

    pub fn norm_fro(&self) -> f64 {
        self.inner.norm()
    }

    /// Spectral norm (largest singular value).
    pub fn norm_op(&self) -> f64 {
        self.inner
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .fold(0.0f64, |a, &b| a.max(b))
    }

    /// Frobenius defect ‖M − M*‖_F.
    pub fn herm_defect(&self) -> f64 {
        (&self.inner - self.inner.adjoint()).norm()
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        CMat { inner: &self.inner * &rhs.inner }
    }

    pub fn mul_vec(&self, v: &CVec) -> CVec {
        CVec { inner: &self.inner * &v.inner }
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        CMat { inner: &self.inner + &rhs.inner }
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        CMat { inner: &self.inner - &rhs.inner }
    }

    pub fn neg(&self) -> CMat {
        CMat { inner: -self.inner.clone() }
    }

    /// Hilbert–Schmidt (trace) inner product ⟨X, Y⟩ = trace(Y* X).
    ///
    /// Linear in `self`, conjugate-linear in `other`; ⟨X, X⟩ is the squared
    /// Frobenius norm.
    pub fn hs_inner(&self, other: &CMat) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(format!(
                "hs_inner: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        // trace(Y* X) = Σ conj(y_ij) x_ij without forming the product.
        Ok(self
            .inner
            .iter()
            .zip(other.inner.iter())
            .map(|(x, y)| y.conj() * x)
            .sum())
    }

    pub(crate) fn from_inner(inner: DMatrix<Complex64>) -> CMat {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        CMat { inner }
    }
}

/// Length-n complex column vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec {
    inner: DVector<Complex64>,
}

impl CVec {
    pub fn new(inner: DVector<Complex64>) -> Result<Self> {
        if inner.len() == 0 {
            return Err(Error::DimMismatch("vector dimension must be at least 1".into()));
        }
        if !inner.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("vector entry is NaN or infinite".into()));
        }
        Ok(CVec { inner })
    }

    pub fn from_slice(entries: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_row_slice(entries))
    }

    pub fn zeros(n: usize) -> Self {
        CVec { inner: DVector::zeros(n) }
    }

    /// Standard basis vector e_i.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[i] = c64(1.0, 0.0);
        CVec { inner: v }
    }

    pub fn dim(&self) -> usize {
        self.inner.len()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.inner[i]
    }

    pub fn vector(&self) -> &DVector<Complex64> {
        &self.inner
    }

    pub fn norm(&self) -> f64 {
        self.inner.norm()
    }

    /// ⟨self, other⟩ = self* · other (conjugate-linear in `self`).
    pub fn inner_product(&self, other: &CVec) -> Complex64 {
        self.inner.iter().zip(other.inner.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Quadratic form self* M self.
    pub fn quad(&self, m: &CMat) -> Complex64 {
        self.inner.dotc(&(&m.inner * &self.inner))
    }

    /// Rank-one matrix self · other*.
    pub fn outer(&self, other: &CVec) -> CMat {
        CMat { inner: &self.inner * other.inner.adjoint() }
    }

    /// Unit norm with the first component of modulus > 1e-8 rotated to be
    /// real positive. Deterministic representative of the ray through `self`.
    pub fn normalized(&self) -> CVec {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        let mut v = self.inner.map(|z| z / c64(n, 0.0));
        if let Some(lead) = v.iter().find(|z| z.norm() > 1e-8).copied() {
            let phase = lead / c64(lead.norm(), 0.0);
            v = v.map(|z| z / phase);
        }
        CVec { inner: v }
    }

    pub(crate) fn from_inner(inner: DVector<Complex64>) -> CVec {
        CVec { inner }
    }
}

/// A matrix certified Hermitian: ‖H − H*‖_F ≤ tol.herm · max(1, ‖H‖_F).
#[derive(Debug, Clone)]
pub struct HermMat {
    base: CMat,
    herm_defect: f64,
}

impl HermMat {
    pub fn new(base: CMat, tol: &Tol) -> Result<Self> {
        let defect = base.herm_defect();
        let bound = tol.herm * rel(base.norm_fro());
        if defect > bound {
            return Err(Error::NotHermitian { defect, bound });
        }
        Ok(HermMat { base, herm_defect: defect })
    }

    /// Certify (M + M*)/2; never fails on finite input.
    pub fn symmetrize(m: &CMat, tol: &Tol) -> Result<Self> {
        let h = m.add(&m.adjoint()).scale_re(0.5);
        Self::new(h, tol)
    }

    pub fn base(&self) -> &CMat {
        &self.base
    }

    pub fn herm_defect(&self) -> f64 {
        self.herm_defect
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Spectral norm via the eigenvalue of largest modulus.
    pub fn norm_op(&self) -> f64 {
        spectral::herm_eigenvalues(&self.base)
            .iter()
            .fold(0.0f64, |a, &b| a.max(b.abs()))
    }
}

/// A matrix certified positive definite: Hermitian with smallest eigenvalue
/// above pos_margin · max(1, ‖H‖₂).
#[derive(Debug, Clone)]
pub struct PosMat {
    base: HermMat,
    min_eig: f64,
}

impl PosMat {
    pub fn new(base: HermMat, tol: &Tol) -> Result<Self> {
        let eigs = spectral::herm_eigenvalues(base.base());
        let min_eig = eigs.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let max_abs = eigs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let margin = tol.pos_margin * rel(max_abs);
        if min_eig <= margin {
            return Err(Error::NotPositive { min_eig, margin });
        }
        Ok(PosMat { base, min_eig })
    }

    pub fn from_cmat(m: CMat, tol: &Tol) -> Result<Self> {
        Self::new(HermMat::new(m, tol)?, tol)
    }

    pub fn herm(&self) -> &HermMat {
        &self.base
    }

    pub fn base(&self) -> &CMat {
        self.base.base()
    }

    pub fn min_eig(&self) -> f64 {
        self.min_eig
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }
}

/// Smallest eigenvalue of the Hermitian part of `m`. Convenience wrapper used
/// by margin checks; `m` is symmetrized first so tiny drift does not bias the
/// spectrum.
pub fn min_eig_hermitian(m: &CMat) -> f64 {
    let h = m.add(&m.adjoint()).scale_re(0.5);
    spectral::herm_eigenvalues(&h)
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}
