//! Representations of linear maps 𝒜 : M_n(ℂ) → M_n(ℂ).
//!
//! Two interchangeable forms:
//!
//! * [`OpSum`] — an ordered list of pairs (Eᵢ, Fᵢ) representing
//!   X ↦ Σ Eᵢ X Fᵢ;
//! * [`SuperMat`] — the n²×n² matrix of the same map under column-stacking
//!   vectorization (columns of X concatenated top to bottom), so that
//!   vec(𝒜(X)) = mat · vec(X).
//!
//! The vectorization convention is fixed once here; the realignment index
//! formulas below are stated against it and covered by round-trip tests.
//! A map defines an inner product ⟨X, Y⟩ = trace(Y* 𝒜(X)) exactly when its
//! supermatrix is Hermitian with positive spectrum, which is what
//! [`SuperMat::is_self_adjoint`] and [`SuperMat::is_positive_definite`] test.

use nalgebra::{DMatrix, DVector};

use crate::config::{rel, Tol};
use crate::error::{Error, Result};
use crate::matspace::{c64, herm_eig, CMat, CVec, Complex64, HermMat};

/// Operator-sum form X ↦ Σ Eᵢ X Fᵢ.
///
/// The zero map is representable as an empty pair list (`is_zero`); after
/// [`OpSum::reduce`] a nonzero map has 1 ≤ m ≤ n² pairs with each of the E-
/// and F-families linearly independent.
#[derive(Debug, Clone)]
pub struct OpSum {
    dim: usize,
    pairs: Vec<(CMat, CMat)>,
}

impl OpSum {
    pub fn new(dim: usize, pairs: Vec<(CMat, CMat)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimMismatch("dimension must be at least 1".into()));
        }
        for (k, (e, f)) in pairs.iter().enumerate() {
            if e.dim() != dim || f.dim() != dim {
                return Err(Error::DimMismatch(format!(
                    "pair {k}: expected {dim}x{dim} matrices, got {}x{} and {}x{}",
                    e.dim(),
                    e.dim(),
                    f.dim(),
                    f.dim()
                )));
            }
        }
        Ok(OpSum { dim, pairs })
    }

    pub fn single(e: CMat, f: CMat) -> Result<Self> {
        let dim = e.dim();
        Self::new(dim, vec![(e, f)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of summands m.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// True for the (representable but degenerate) zero map.
    pub fn is_zero(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(CMat, CMat)] {
        &self.pairs
    }

    /// Σ Eᵢ X Fᵢ.
    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        if x.dim() != self.dim {
            return Err(Error::DimMismatch(format!(
                "apply: map dim {} vs input dim {}",
                self.dim,
                x.dim()
            )));
        }
        let mut acc = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (e, f) in &self.pairs {
            acc += e.matrix() * x.matrix() * f.matrix();
        }
        Ok(CMat::from_inner(acc))
    }

    /// Supermatrix of the map: column p is vec(𝒜(U_p)) for the p-th matrix
    /// unit under the column-stacking order (equivalently Σ Fᵢᵀ ⊗ Eᵢ).
    pub fn to_supermat(&self) -> SuperMat {
        let n = self.dim;
        let mut mat = DMatrix::<Complex64>::zeros(n * n, n * n);
        for j in 0..n {
            for i in 0..n {
                let unit = CMat::matrix_unit(n, i, j);
                let image = self.apply(&unit).expect("dims match by construction");
                mat.set_column(j * n + i, &vec_col(&image));
            }
        }
        SuperMat { dim: n, mat: CMat::from_inner(mat) }
    }

    /// Equivalent operator sum with linearly independent E- and F-families,
    /// implemented as the supermatrix round trip.
    pub fn reduce(&self, tol: &Tol) -> Result<OpSum> {
        from_supermat(&self.to_supermat(), tol)
    }

    /// The adjoint map X ↦ Σ Eᵢ* X Fᵢ*, satisfying
    /// ⟨𝒜(X), Y⟩ = ⟨X, adjoint(Y)⟩ under the trace pairing.
    pub fn adjoint_superop(&self) -> OpSum {
        OpSum {
            dim: self.dim,
            pairs: self.pairs.iter().map(|(e, f)| (e.adjoint(), f.adjoint())).collect(),
        }
    }

    /// Self-adjointness via the supermatrix; returns (verdict, defect).
    pub fn is_self_adjoint(&self, tol: &Tol) -> (bool, f64) {
        self.to_supermat().is_self_adjoint(tol)
    }

    /// Positive-definiteness via the supermatrix; requires self-adjointness.
    pub fn is_positive_definite(&self, tol: &Tol) -> Result<(bool, f64)> {
        self.to_supermat().is_positive_definite(tol)
    }

    /// Σᵢ (x*Eᵢx)(y*Fᵢy) — the rank-one pairing ⟨𝒜(xy*), xy*⟩.
    pub fn rank_one_pairing(&self, x: &CVec, y: &CVec) -> Complex64 {
        self.pairs
            .iter()
            .map(|(e, f)| x.quad(e) * y.quad(f))
            .sum()
    }

    /// Largest Frobenius norm over the images of the matrix units; the scale
    /// against which apply-residuals are measured.
    pub fn unit_image_scale(&self) -> f64 {
        let n = self.dim;
        let mut s = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let u = CMat::matrix_unit(n, i, j);
                s = s.max(self.apply(&u).expect("dims match").norm_fro());
            }
        }
        s
    }
}

/// Maximum Frobenius deviation of the two maps over all matrix units.
pub fn unit_apply_distance(a: &OpSum, b: &OpSum) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    let n = a.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let u = CMat::matrix_unit(n, i, j);
            worst = worst.max(a.apply(&u)?.sub(&b.apply(&u)?).norm_fro());
        }
    }
    Ok(worst)
}

/// n²×n² matrix of a map under column-stacking vectorization.
#[derive(Debug, Clone)]
pub struct SuperMat {
    dim: usize,
    mat: CMat,
}

impl SuperMat {
    pub fn new(dim: usize, mat: CMat) -> Result<Self> {
        if mat.dim() != dim * dim {
            return Err(Error::DimMismatch(format!(
                "supermatrix for dim {dim} must be {}x{}, got {}x{}",
                dim * dim,
                dim * dim,
                mat.dim(),
                mat.dim()
            )));
        }
        Ok(SuperMat { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// unvec(mat · vec(X)).
    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        if x.dim() != self.dim {
            return Err(Error::DimMismatch(format!(
                "apply: map dim {} vs input dim {}",
                self.dim,
                x.dim()
            )));
        }
        let v = self.mat.matrix() * vec_col(x);
        Ok(unvec_col(self.dim, &v))
    }

    /// (verdict, defect) where defect = ‖M − M*‖_F / max(1, ‖M‖_F).
    ///
    /// Hermitian supermatrix ⇔ ⟨𝒜(X), Y⟩ = ⟨X, 𝒜(Y)⟩ for all X, Y.
    pub fn is_self_adjoint(&self, tol: &Tol) -> (bool, f64) {
        let defect = self.mat.herm_defect() / rel(self.mat.norm_fro());
        (defect <= tol.self_adjoint, defect)
    }

    /// (verdict, min_eig); requires self-adjointness.
    ///
    /// The map defines an inner product exactly when this holds.
    pub fn is_positive_definite(&self, tol: &Tol) -> Result<(bool, f64)> {
        let (sa, defect) = self.is_self_adjoint(tol);
        if !sa {
            return Err(Error::NotSelfAdjoint { defect });
        }
        let herm = HermMat::symmetrize(&self.mat, tol)?;
        let eig = herm_eig(&herm, tol)?;
        let min_eig = eig.eigenvalues[0];
        let max_abs = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |a, &b| a.max(b.abs()));
        Ok((min_eig > tol.pos_def * rel(max_abs), min_eig))
    }

    /// A nonzero X with ⟨𝒜(X), X⟩ ≤ 0, from the most negative eigenvector;
    /// None when the map is positive definite.
    pub fn violating_input(&self, tol: &Tol) -> Result<Option<CMat>> {
        let (pd, _) = self.is_positive_definite(tol)?;
        if pd {
            return Ok(None);
        }
        let herm = HermMat::symmetrize(&self.mat, tol)?;
        let eig = herm_eig(&herm, tol)?;
        let v = eig.eigenvectors.matrix().column(0).into_owned();
        Ok(Some(unvec_col(self.dim, &v)))
    }
}

/// Column-stacking vectorization: vec(X)[i + j·n] = X[i, j].
pub fn vec_col(x: &CMat) -> DVector<Complex64> {
    let n = x.dim();
    DVector::from_fn(n * n, |p, _| x.get(p % n, p / n))
}

/// Inverse of [`vec_col`].
pub fn unvec_col(n: usize, v: &DVector<Complex64>) -> CMat {
    CMat::from_fn(n, |i, j| v[i + j * n]).expect("finite by construction")
}

/// Row-major unvec (used only by the realignment factorization).
fn unvec_row(n: usize, v: &DVector<Complex64>) -> CMat {
    CMat::from_fn(n, |i, j| v[i * n + j]).expect("finite by construction")
}

/// Realignment of a supermatrix: the n²×n² matrix R with (0-based)
/// R[i·n + j, k·n + l] = mat[k·n + i, l·n + j]. A single pair (E, F)
/// contributes the rank-one term rvec(E) · cvec(F)ᵀ, so the rank of R is the
/// minimal number of summands of the map.
fn realign(s: &SuperMat) -> DMatrix<Complex64> {
    let n = s.dim;
    DMatrix::from_fn(n * n, n * n, |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        s.mat.get(k * n + i, l * n + j)
    })
}

/// Minimal-length operator sum of a supermatrix via the singular value
/// factorization of its realignment. Each retained triple (σ, u, v) becomes
/// one pair: E is the row-major unvec of √σ·u and F the column-major unvec of
/// √σ·conj(v) — the placement that makes apply-equivalence hold, which is
/// verified before returning. The zero map comes back with m = 0.
pub fn from_supermat(s: &SuperMat, tol: &Tol) -> Result<OpSum> {
    let n = s.dim;
    let r = realign(s);
    let svd = r.svd(true, true);
    let u = svd.u.as_ref().ok_or_else(|| Error::Numerical("SVD did not produce U".into()))?;
    let vt = svd.v_t.as_ref().ok_or_else(|| Error::Numerical("SVD did not produce V^T".into()))?;
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));

    let mut pairs = Vec::new();
    for (k, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma <= tol.sv_cutoff * sigma_max {
            continue;
        }
        let root = sigma.sqrt();
        let ucol = u.column(k).map(|z| z * c64(root, 0.0));
        // Row k of V^T is conj(v_k) already.
        let vrow = vt.row(k).transpose().map(|z| z * c64(root, 0.0));
        pairs.push((unvec_row(n, &ucol), unvec_col(n, &vrow)));
    }
    let out = OpSum { dim: n, pairs };

    // Placement is verified, not assumed.
    let rebuilt = out.to_supermat();
    let dev = rebuilt.mat.sub(&s.mat).norm_fro();
    let bound = 1e-9 * rel(s.mat.norm_fro());
    if dev > bound {
        return Err(Error::Numerical(format!(
            "realignment factorization failed apply-equivalence: {dev:.3e} > {bound:.3e}"
        )));
    }
    Ok(out)
}

/// Smallest/largest singular value ratio of the stacking of a matrix family;
/// the family counts as linearly independent when this exceeds
/// `tol.lin_indep`.
pub fn independence_ratio(family: &[CMat]) -> f64 {
    if family.is_empty() {
        return 1.0;
    }
    let n = family[0].dim();
    let m = family.len();
    if m > n * n {
        return 0.0; // more members than the dimension of the space
    }
    let stack = DMatrix::<Complex64>::from_fn(m, n * n, |r, c| vec_col(&family[r])[c]);
    let sv = stack.svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let smin = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if smax == 0.0 {
        0.0
    } else {
        smin / smax
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::counterexample_map;

    fn re(x: f64) -> Complex64 {
        c64(x, 0.0)
    }

    fn id_sum(n: usize) -> OpSum {
        OpSum::single(CMat::identity(n), CMat::identity(n)).unwrap()
    }

    #[test]
    fn apply_identity_pair_is_identity_map() {
        let s = id_sum(2);
        let x = CMat::from_rows(2, &[c64(1.0, 2.0), re(3.0), c64(0.0, -1.0), re(4.0)]).unwrap();
        assert!(s.apply(&x).unwrap().sub(&x).norm_fro() < 1e-15);
    }

    #[test]
    fn apply_counterexample_on_units() {
        let tol = Tol::default();
        let m = counterexample_map(0.25, &tol).unwrap();
        let e12 = CMat::matrix_unit(2, 0, 1);
        let img = m.opsum().apply(&e12).unwrap();
        let expect = CMat::from_real_rows(2, &[0.0, 0.25, 0.0, 0.0]).unwrap();
        assert!(img.sub(&expect).norm_fro() == 0.0);

        let e22 = CMat::matrix_unit(2, 1, 1);
        let img = m.opsum().apply(&e22).unwrap();
        let expect = CMat::from_real_rows(2, &[0.75, 0.0, 0.0, 1.0]).unwrap();
        assert!(img.sub(&expect).norm_fro() == 0.0);
    }

    #[test]
    fn to_supermat_identity_pair() {
        let s = id_sum(2).to_supermat();
        assert!(s.mat().sub(&CMat::identity(4)).norm_fro() < 1e-15);
    }

    #[test]
    fn to_supermat_counterexample_matches_unit_images() {
        // Oracle: evaluate the ε-map on each matrix unit by hand; vec order
        // (x11, x21, x12, x22).
        let tol = Tol::default();
        let m = counterexample_map(0.25, &tol).unwrap();
        let s = m.opsum().to_supermat();
        let expect = CMat::from_real_rows(
            4,
            &[
                1.0, 0.0, 0.0, 0.75, //
                0.0, 0.25, 0.0, 0.0, //
                0.0, 0.0, 0.25, 0.0, //
                0.75, 0.0, 0.0, 1.0,
            ],
        )
        .unwrap();
        assert!(s.mat().sub(&expect).norm_fro() < 1e-15);
    }

    #[test]
    fn to_supermat_is_kron_of_pair() {
        // [(A, B)] → Bᵀ ⊗ A, checked entrywise against the brute-force
        // matrix-unit construction.
        let a = CMat::from_rows(2, &[c64(1.0, 0.5), re(2.0), c64(-1.0, 1.0), c64(0.0, -2.0)]).unwrap();
        let b = CMat::from_rows(2, &[re(0.5), c64(1.0, -1.0), c64(2.0, 0.25), re(-3.0)]).unwrap();
        let s = OpSum::single(a.clone(), b.clone()).unwrap().to_supermat();
        let bt = b.transpose();
        for bi in 0..2 {
            for bj in 0..2 {
                for ai in 0..2 {
                    for aj in 0..2 {
                        let got = s.mat().get(bi * 2 + ai, bj * 2 + aj);
                        let expect = bt.get(bi, bj) * a.get(ai, aj);
                        assert!((got - expect).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn from_supermat_identity_gives_single_pair() {
        let tol = Tol::default();
        let s = SuperMat::new(2, CMat::identity(4)).unwrap();
        let o = from_supermat(&s, &tol).unwrap();
        assert_eq!(o.len(), 1);
        // Pair equals (I, I) up to a scalar split.
        let (e, f) = &o.pairs()[0];
        let prod = e.get(0, 0) * f.get(0, 0);
        assert!((prod - re(1.0)).norm() < 1e-12);
        assert!(e.sub(&CMat::identity(2).scale(e.get(0, 0))).norm_fro() < 1e-12);
        assert!(f.sub(&CMat::identity(2).scale(f.get(0, 0))).norm_fro() < 1e-12);
    }

    #[test]
    fn from_supermat_counterexample_rank_four() {
        let tol = Tol::default();
        for eps in [0.1, 0.25, 0.4] {
            let m = counterexample_map(eps, &tol).unwrap();
            let o = from_supermat(m.supermat(), &tol).unwrap();
            assert_eq!(o.len(), 4, "eps = {eps}");
        }
    }

    #[test]
    fn from_supermat_round_trip_random() {
        let tol = Tol::default();
        // Deterministic pseudo-random 4x4 supermatrix.
        let mut seed = 7u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mat = CMat::from_fn(4, |_, _| c64(next(), next())).unwrap();
        let s = SuperMat::new(2, mat).unwrap();
        let o = from_supermat(&s, &tol).unwrap();
        let rt = o.to_supermat();
        assert!(rt.mat().sub(s.mat()).norm_fro() < 1e-9 * rel(s.mat().norm_fro()));
    }

    #[test]
    fn from_supermat_zero_map_is_flagged() {
        let tol = Tol::default();
        let s = SuperMat::new(2, CMat::zeros(4)).unwrap();
        let o = from_supermat(&s, &tol).unwrap();
        assert!(o.is_zero());
        assert_eq!(o.len(), 0);
    }

    #[test]
    fn reduce_collapses_duplicates() {
        let tol = Tol::default();
        let s = OpSum::new(
            2,
            vec![
                (CMat::identity(2), CMat::identity(2)),
                (CMat::identity(2), CMat::identity(2)),
            ],
        )
        .unwrap();
        let r = s.reduce(&tol).unwrap();
        assert_eq!(r.len(), 1);
        assert!(unit_apply_distance(&s, &r).unwrap() < 1e-12);
    }

    #[test]
    fn reduce_collapses_scalar_multiples() {
        let tol = Tol::default();
        let a = CMat::from_rows(2, &[c64(1.0, 1.0), re(0.5), re(-2.0), c64(0.0, 1.0)]).unwrap();
        let b = CMat::from_rows(2, &[re(1.0), c64(2.0, -1.0), re(0.0), re(3.0)]).unwrap();
        let s = OpSum::new(
            2,
            vec![(a.clone(), b.clone()), (a.scale_re(2.0), b.neg())],
        )
        .unwrap();
        let r = s.reduce(&tol).unwrap();
        assert_eq!(r.len(), 1);
        assert!(unit_apply_distance(&s, &r).unwrap() < 1e-10);
    }

    #[test]
    fn reduce_keeps_independent_sums() {
        let tol = Tol::default();
        let a = CMat::from_real_rows(2, &[1.0, 0.0, 0.0, 2.0]).unwrap();
        let b = CMat::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = OpSum::new(2, vec![(a.clone(), b.clone()), (b, a)]).unwrap();
        assert_eq!(s.reduce(&tol).unwrap().len(), 2);
    }

    #[test]
    fn adjoint_superop_examples() {
        let s = id_sum(2).adjoint_superop();
        assert!(s.pairs()[0].0.sub(&CMat::identity(2)).norm_fro() < 1e-15);

        let e12 = CMat::matrix_unit(2, 0, 1);
        let s = OpSum::single(e12, CMat::identity(2)).unwrap().adjoint_superop();
        assert!(s.pairs()[0].0.sub(&CMat::matrix_unit(2, 1, 0)).norm_fro() < 1e-15);
    }

    #[test]
    fn adjoint_pairing_identity_on_units() {
        // ⟨𝒜(X), Y⟩ = ⟨X, 𝒜*(Y)⟩ brute-forced over all matrix units.
        let a = CMat::from_rows(2, &[c64(1.0, 2.0), re(0.5), c64(-1.0, 0.0), c64(0.0, 1.0)]).unwrap();
        let b = CMat::from_rows(2, &[re(2.0), c64(0.0, -1.0), c64(1.0, 1.0), re(0.0)]).unwrap();
        let s = OpSum::single(a, b).unwrap();
        let adj = s.adjoint_superop();
        for p in 0..4 {
            for q in 0..4 {
                let x = CMat::matrix_unit(2, p / 2, p % 2);
                let y = CMat::matrix_unit(2, q / 2, q % 2);
                let lhs = s.apply(&x).unwrap().hs_inner(&y).unwrap();
                let rhs = x.hs_inner(&adj.apply(&y).unwrap()).unwrap();
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn self_adjoint_detection() {
        let tol = Tol::default();
        let m = counterexample_map(0.3, &tol).unwrap();
        let (sa, _) = m.opsum().is_self_adjoint(&tol);
        assert!(sa);

        let s = OpSum::single(CMat::identity(2), CMat::matrix_unit(2, 0, 1)).unwrap();
        let (sa, defect) = s.is_self_adjoint(&tol);
        assert!(!sa && defect > 1e-3);

        // Hermitian pairs are always self-adjoint.
        let h = CMat::from_rows(2, &[re(1.0), c64(0.0, 1.0), c64(0.0, -1.0), re(-2.0)]).unwrap();
        let k = CMat::from_real_rows(2, &[0.0, 1.0, 1.0, 3.0]).unwrap();
        let (sa, _) = OpSum::single(h, k).unwrap().is_self_adjoint(&tol);
        assert!(sa);
    }

    #[test]
    fn positive_definite_detection() {
        let tol = Tol::default();
        let (pd, me) = id_sum(2).is_positive_definite(&tol).unwrap();
        assert!(pd && (me - 1.0).abs() < 1e-12);

        let m = counterexample_map(0.25, &tol).unwrap();
        let (pd, me) = m.opsum().is_positive_definite(&tol).unwrap();
        assert!(pd && (me - 0.25).abs() < 1e-12);

        let s = OpSum::single(CMat::real_diag(&[1.0, -1.0]), CMat::identity(2)).unwrap();
        let (pd, me) = s.is_positive_definite(&tol).unwrap();
        assert!(!pd && me < -0.5);
        // A violating X exists and certifies the failure.
        let x = s.to_supermat().violating_input(&tol).unwrap().unwrap();
        let q = s.apply(&x).unwrap().hs_inner(&x).unwrap();
        assert!(q.re <= 0.0);
    }

    #[test]
    fn rank_one_pairing_examples() {
        let tol = Tol::default();
        let e1 = CVec::basis(2, 0);
        let e2 = CVec::basis(2, 1);
        assert!((id_sum(2).rank_one_pairing(&e1, &e1) - re(1.0)).norm() < 1e-15);

        let m = counterexample_map(0.25, &tol).unwrap();
        let p = m.opsum().rank_one_pairing(&e1, &e2);
        assert!((p - re(0.25)).norm() < 1e-14);

        // Identity oracle: Σ (x*Ex)(y*Fy) = ⟨𝒜(xy*), xy*⟩.
        let x = CVec::from_slice(&[c64(0.3, -0.4), c64(1.2, 0.1)]).unwrap();
        let y = CVec::from_slice(&[c64(-0.7, 0.2), c64(0.5, 0.9)]).unwrap();
        let xy = x.outer(&y);
        let via_trace = m.opsum().apply(&xy).unwrap().hs_inner(&xy).unwrap();
        let via_pairing = m.opsum().rank_one_pairing(&x, &y);
        assert!((via_trace - via_pairing).norm() < 1e-10);
    }

    #[test]
    fn adjoint_consistency_supermat() {
        let a = CMat::from_rows(2, &[c64(1.0, 1.0), re(2.0), re(0.0), c64(0.5, -0.5)]).unwrap();
        let b = CMat::from_rows(2, &[re(1.0), c64(0.0, 2.0), re(-1.0), re(0.5)]).unwrap();
        let s = OpSum::single(a, b).unwrap();
        let lhs = s.adjoint_superop().to_supermat();
        let rhs = s.to_supermat();
        assert!(lhs.mat().sub(&rhs.mat().adjoint()).norm_fro() < 1e-10);
    }

    #[test]
    fn independence_ratio_flags_dependence() {
        let a = CMat::identity(2);
        let fam = vec![a.clone(), a.scale_re(2.0)];
        assert!(independence_ratio(&fam) < 1e-12);
        let fam = vec![CMat::matrix_unit(2, 0, 0), CMat::matrix_unit(2, 1, 1)];
        assert!(independence_ratio(&fam) > 0.5);
    }
}
