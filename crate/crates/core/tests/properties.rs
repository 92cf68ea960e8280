//! Cross-module invariants: trace-pairing positivity, pencil behavior,
//! representation equivalence, and pipeline soundness on randomized inputs.

use proptest::prelude::*;

use ipfactor_core::batch::{run_trials, trial_seed};
use ipfactor_core::hermitize::{compute_c, conj_sqrt};
use ipfactor_core::matspace::{log_unit_conj, mat_exp, min_eig_hermitian, pencil_min};
use ipfactor_core::pipeline::{decompose, hermitize_with_fallback, DecomposeTarget, HermitizeRoute};
use ipfactor_core::random::{
    random_cmat, random_positive, random_positive_hermitian_opsum, random_selfadjoint_opsum,
};
use ipfactor_core::superop::{from_supermat, unit_apply_distance, OpSum, SuperMat};
use ipfactor_core::witness::counterexample_map;
use ipfactor_core::{CMat, Complex64, HermMat, PosMat, Tol};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cmat_strategy(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(-10.0f64..10.0, 2 * n * n).prop_map(move |v| {
        let entries: Vec<Complex64> = v
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        CMat::from_rows(n, &entries).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_involutive(m in cmat_strategy(3)) {
        prop_assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn hs_inner_self_is_nonneg_real(m in cmat_strategy(3)) {
        let ip = m.hs_inner(&m).unwrap();
        prop_assert!(ip.im.abs() < 1e-12 * ip.re.max(1.0));
        prop_assert!(ip.re >= 0.0);
        // Zero only at the zero matrix.
        if m.norm_fro() > 1e-6 {
            prop_assert!(ip.re > 0.0);
        }
    }

    #[test]
    fn trace_is_cyclic(a in cmat_strategy(2), b in cmat_strategy(2)) {
        let d = a.mul(&b).trace() - b.mul(&a).trace();
        let scale = a.norm_fro() * b.norm_fro();
        prop_assert!(d.norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn supermat_and_opsum_apply_agree(a in cmat_strategy(2), b in cmat_strategy(2), x in cmat_strategy(2)) {
        let s = OpSum::new(2, vec![(a, b)]).unwrap();
        let sm = s.to_supermat();
        let d = s.apply(&x).unwrap().sub(&sm.apply(&x).unwrap()).norm_fro();
        let scale = s.unit_image_scale().max(1.0) * x.norm_fro().max(1.0);
        prop_assert!(d <= 1e-10 * scale);
    }

    #[test]
    fn adjoint_superop_consistent_with_supermat_adjoint(a in cmat_strategy(2), b in cmat_strategy(2)) {
        let s = OpSum::new(2, vec![(a, b)]).unwrap();
        let lhs = s.adjoint_superop().to_supermat();
        let rhs = s.to_supermat();
        let scale = rhs.mat().norm_fro().max(1.0);
        prop_assert!(lhs.mat().sub(&rhs.mat().adjoint()).norm_fro() <= 1e-10 * scale);
    }
}

#[test]
fn trace_pairing_positive_on_thousand_triples() {
    // ⟨A·X·B, X⟩ > 0 for positive A, B and nonzero X, across n ∈ {2, 3, 4}.
    let failures: usize = run_trials(1000, |i| {
        let n = 2 + i % 3;
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(0x1000, i));
        let a = random_positive(n, 0.05, &mut rng);
        let b = random_positive(n, 0.05, &mut rng);
        let x = random_cmat(n, &mut rng);
        let ip = a.mul(&x).mul(&b).hs_inner(&x).unwrap();
        usize::from(!(ip.re > 0.0 && ip.im.abs() < 1e-10 * ip.re.max(1.0)))
    })
    .into_iter()
    .sum();
    assert_eq!(failures, 0);
}

#[test]
fn pencil_min_touch_point_properties() {
    let tol = Tol::default();
    for i in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(0x2000, i));
        let n = 2 + i % 3;
        let p_raw = random_positive(n, 0.1, &mut rng);
        let q_raw = random_positive(n, 0.1, &mut rng);
        let p = HermMat::new(p_raw.clone(), &tol).unwrap();
        let q = PosMat::from_cmat(q_raw.clone(), &tol).unwrap();
        let (t0, y0) = pencil_min(&p, &q, &tol).unwrap();
        assert!(t0 > 0.0, "positive pencil has positive touch point");

        // Just inside the interval the pencil stays positive.
        let inside = p_raw.sub(&q_raw.scale_re(t0 * (1.0 - 1e-6)));
        assert!(min_eig_hermitian(&inside) > 0.0, "trial {i}");

        // At t0 the pencil is singular.
        let at = p_raw.sub(&q_raw.scale_re(t0));
        let scale = p_raw.norm_fro() + t0 * q_raw.norm_fro();
        assert!(
            min_eig_hermitian(&at).abs() <= 1e-7 * scale.max(1.0),
            "trial {i}: min eig at touch point {}",
            min_eig_hermitian(&at)
        );
        let _ = y0;
    }
}

#[test]
fn log_exp_round_trip_on_conjugate_involutions() {
    let tol = Tol::default();
    for i in 0..60 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(0x3000, i));
        let m = 2 + i % 3;
        let k = CMat::from_fn(m, |_, _| {
            Complex64::new(rand::Rng::gen_range(&mut rng, -2.0..2.0), 0.0)
        })
        .unwrap();
        let c = mat_exp(&k.scale(Complex64::new(0.0, 1.0)));
        let l = log_unit_conj(&c, &tol).unwrap();
        assert!(mat_exp(&l).sub(&c).norm_fro() <= 1e-8 * c.norm_fro().max(1.0), "trial {i}");
        assert!(l.add(&l.conj()).norm_fro() <= 1e-7 * l.norm_fro().max(1.0), "trial {i}");
    }
}

#[test]
fn from_supermat_is_minimal_and_reduce_is_idempotent() {
    let tol = Tol::default();
    for i in 0..30 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(0x4000, i));
        let n = 2;
        let mat = random_cmat(n * n, &mut rng);
        let s = SuperMat::new(n, mat).unwrap();
        let o = from_supermat(&s, &tol).unwrap();
        let o2 = o.reduce(&tol).unwrap();
        assert_eq!(o.len(), o2.len(), "reduce is a fixed point");
        assert!(unit_apply_distance(&o, &o2).unwrap() <= 1e-9 * o.unit_image_scale().max(1.0));
    }
}

#[test]
fn positive_definiteness_matches_sampling() {
    let tol = Tol::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xabcd);

    // Positive map: every random nonzero X has a positive quadratic form.
    let s = random_positive_hermitian_opsum(2, 3, &mut rng);
    let (pd, _) = s.is_positive_definite(&tol).unwrap();
    assert!(pd);
    for _ in 0..1000 {
        let x = random_cmat(2, &mut rng);
        let q = s.apply(&x).unwrap().hs_inner(&x).unwrap();
        assert!(q.re > 0.0);
    }

    // Indefinite map: the reported eigenvector violates positivity.
    let bad = OpSum::new(
        2,
        vec![(CMat::real_diag(&[1.0, -1.0]), CMat::identity(2))],
    )
    .unwrap();
    let sm = bad.to_supermat();
    let (pd, _) = sm.is_positive_definite(&tol).unwrap();
    assert!(!pd);
    let x = sm.violating_input(&tol).unwrap().expect("violating input exists");
    let q = bad.apply(&x).unwrap().hs_inner(&x).unwrap();
    assert!(q.re <= 0.0);
}

#[test]
fn hermitize_pipeline_soundness_sample() {
    // Smaller companion of the acceptance sweep: every self-adjoint map
    // hermitizes (either route) with Hermitian pairs and tight residual.
    let tol = Tol::default();
    let outcomes = run_trials(60, |i| {
        let n = 2 + i % 2;
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(0x5000, i));
        let m = 1 + (trial_seed(3, i) as usize) % (n * n);
        let s = random_selfadjoint_opsum(n, m, &mut rng);
        let (h, route) = hermitize_with_fallback(&s, &tol)?;
        for (a, b) in h.pairs() {
            assert!(a.herm_defect() <= 1e-10 * a.norm_fro().max(1.0));
            assert!(b.herm_defect() <= 1e-10 * b.norm_fro().max(1.0));
        }
        let d = unit_apply_distance(&s, &h)?;
        assert!(d <= 1e-8 * s.unit_image_scale().max(1.0));
        Ok::<HermitizeRoute, ipfactor_core::Error>(route)
    });
    let failures = outcomes.iter().filter(|r| r.is_err()).count();
    assert_eq!(failures, 0, "{:?}", outcomes.iter().find(|r| r.is_err()));
}

#[test]
fn minus_one_pipeline_soundness_sample() {
    let tol = Tol::default();
    let ok = run_trials(50, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(0x6000, i));
        let s = random_positive_hermitian_opsum(2, 4, &mut rng);
        let out = decompose(&s, DecomposeTarget::MinusOne, &tol)?;
        let cert = out.certificate;
        assert!(cert.verify(&s, &tol).ok);
        assert_eq!(cert.signs.iter().filter(|&&x| x == -1).count(), 1);
        Ok::<(), ipfactor_core::Error>(())
    })
    .into_iter()
    .filter(Result::is_ok)
    .count();
    assert!(ok >= 50, "all trials re-verify");
}

#[test]
fn conj_sqrt_from_counterexample_families() {
    // The C arising from the ε-map and from random self-adjoint maps admits
    // the square root with both identities intact.
    let tol = Tol::default();
    let m = counterexample_map(0.35, &tol).unwrap();
    let c = compute_c(m.opsum(), &tol).unwrap();
    let d = conj_sqrt(&c, &tol).unwrap();
    assert!(d.matrix().mul(d.matrix()).sub(c.matrix()).norm_fro() < 1e-7);

    for i in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(0x7000, i));
        let s = random_selfadjoint_opsum(2, 3, &mut rng).reduce(&tol).unwrap();
        let c = compute_c(&s, &tol).unwrap();
        let d = conj_sqrt(&c, &tol).unwrap();
        let mm = c.order();
        assert!(
            d.matrix().mul(&d.matrix().conj()).sub(&CMat::identity(mm)).norm_fro()
                <= 1e-7 * mm as f64
        );
    }
}

#[test]
fn quadratic_form_identity_thousandfold() {
    let tol = Tol::default();
    let map = counterexample_map(0.3, &tol).unwrap();
    let worst: f64 = run_trials(1000, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(0x8000, i));
        let x = random_cmat(2, &mut rng);
        let closed = ipfactor_core::witness::quadratic_form(&map, &x);
        let traced = map.opsum().apply(&x).unwrap().hs_inner(&x).unwrap();
        ((closed - traced.re).abs()).max(traced.im.abs()) / x.norm_fro().powi(2).max(1.0)
    })
    .into_iter()
    .fold(0.0, f64::max);
    assert!(worst <= 1e-12, "worst relative deviation {worst:.3e}");
}
