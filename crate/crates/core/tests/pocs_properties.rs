mod common;

use common::{random_general, random_sos, random_tensor, random_unit, rng};
use elasticity_se::{
    pocs_verify, project_affine, project_psd, ElasticityTensor64, FourthOrder, PocsOptions, PocsStatus,
    SymmetricEigen, UnfoldMode,
};
use proptest::prelude::*;

fn dist<T: FourthOrder<f64>>(a: &T, b: &T) -> f64 {
    a.entries().iter().zip(b.entries()).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(common::config(200))]

    #[test]
    fn projections_are_idempotent(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let t = random_general(&mut r, n);
        let a = random_tensor(&mut r, n, -1.0, 1.0);
        let p = project_psd(&t).unwrap();
        prop_assert!(dist(&project_psd(&p).unwrap(), &p) <= 1e-10);
        let q = project_affine(&t, &a).unwrap();
        prop_assert!(dist(&project_affine(&q, &a).unwrap(), &q) <= 1e-10);
    }

    #[test]
    fn projections_are_nonexpansive(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let (t1, t2) = (random_general(&mut r, n), random_general(&mut r, n));
        let a = random_tensor(&mut r, n, -1.0, 1.0);
        let d = dist(&t1, &t2);
        prop_assert!(dist(&project_psd(&t1).unwrap(), &project_psd(&t2).unwrap()) <= d + 1e-12);
        prop_assert!(dist(&project_affine(&t1, &a).unwrap(), &project_affine(&t2, &a).unwrap()) <= d + 1e-12);
    }

    #[test]
    fn psd_projection_lands_in_the_cone(seed in any::<u64>(), n in 2usize..=3) {
        let t = random_general(&mut rng(seed), n);
        let p = project_psd(&t).unwrap();
        let m = p.unfold(UnfoldMode::X).matrix;
        prop_assert!(SymmetricEigen::new(&m).min() >= -1e-12);
        // the clipped matrix keeps the weak symmetry projections rely on
        prop_assert!(m.asymmetry() <= 1e-14);
    }

    #[test]
    fn affine_projection_preserves_the_biquadratic_form(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let t = random_general(&mut r, n);
        let a = random_tensor(&mut r, n, -1.0, 1.0);
        let q = project_affine(&t, &a).unwrap();
        prop_assert!(dist(&q.symmetric_part(), &a) <= 1e-12);
        for _ in 0..8 {
            let x = random_unit(&mut r, n);
            let y = random_unit(&mut r, n);
            let lhs = q.contract_xxyy(&x, &y);
            let rhs = a.contract_xxyy(&x, &y).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(common::config(24))]

    #[test]
    fn residual_trace_never_increases(seed in any::<u64>(), n in 2usize..=3, feasible in any::<bool>()) {
        let mut r = rng(seed);
        let a = if feasible { random_sos(&mut r, n, 2, 0.0) } else { random_tensor(&mut r, n, -1.0, 1.0) };
        let out = pocs_verify(&a, &PocsOptions { max_iter: 2000, ..PocsOptions::default() }).unwrap();
        let h = &out.diagnostics.history;
        prop_assert!(h.windows(2).all(|w| w[1] <= w[0] + 1e-12), "trace {:?}", &h[..h.len().min(8)]);
    }

    #[test]
    fn certificates_reconstruct_and_bound_the_form(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let a = random_sos(&mut r, n, n, 0.5);
        let out = pocs_verify(&a, &PocsOptions::default()).unwrap();
        prop_assert_eq!(out.status, PocsStatus::CertifiedMPd);
        let cert = out.certificate.unwrap();
        prop_assert!(cert.reconstruction_error(&a) <= 1e-8 * a.max_abs().max(1.0));
        prop_assert!(cert.terms.iter().all(|t| t.alpha > 0.0));
        for _ in 0..16 {
            let x = random_unit(&mut r, n);
            let y = random_unit(&mut r, n);
            prop_assert!(a.contract_xxyy(&x, &y).unwrap() >= cert.epsilon - 1e-9);
        }
    }
}

#[test]
fn negative_definite_tensor_is_inconclusive() {
    let a = ElasticityTensor64::identity(2).scale(-1.0);
    let out = pocs_verify(&a, &PocsOptions::default()).unwrap();
    assert_eq!(out.status, PocsStatus::Inconclusive);
    assert!(out.certificate.is_none());
    assert!(out.diagnostics.residual > 0.5);
}

#[test]
fn certificate_json_has_the_documented_shape() {
    let a = common::biquadratic_example();
    let out = pocs_verify(&a, &PocsOptions { epsilon: Some(0.0), ..PocsOptions::default() }).unwrap();
    let cert = out.certificate.expect("biquadratic example is certified");
    let v: serde_json::Value = serde_json::from_str(&cert.to_json(&a)).unwrap();
    assert_eq!(v["epsilon"], 0.0);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), cert.terms.len());
    for t in terms {
        assert!(t["alpha"].as_f64().unwrap() > 0.0);
        let u = t["U"].as_array().unwrap();
        assert_eq!(u.len(), 3);
        assert!(u.iter().all(|row| row.as_array().unwrap().len() == 3));
    }
    assert!(v["reconstruction_error"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn pocs_is_deterministic() {
    let a = random_tensor(&mut rng(5), 3, -1.0, 1.0).shift(1.0, 2.0);
    let first = pocs_verify(&a, &PocsOptions::default()).unwrap();
    let second = pocs_verify(&a, &PocsOptions::default()).unwrap();
    assert_eq!(first.diagnostics.history, second.diagnostics.history);
    assert_eq!(first.status, second.status);
}
