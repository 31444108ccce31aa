mod common;

use common::{biquadratic_example, biquadratic_form, canonical, data, nonneg_example, random_unit, rng, zm_example};
use elasticity_se::io::read_tensor;
use elasticity_se::mclass::ClassifyOptions;
use elasticity_se::{
    classify, enumerate_spectrum, is_irreducible, pocs_verify, power_method_max, power_method_min,
    spectral_radius_nonneg, ElasticityTensor64, EnumerateOptions, FourthOrder, Matrix64, PocsOptions, PocsStatus,
    PowerOptions, SymmetricEigen, UnfoldMode, Verdict,
};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| (p - q).abs() <= tol)
}

#[test]
fn fixture_files_match_the_listed_entries() {
    let cases: [(&str, ElasticityTensor64); 4] = [
        ("zmtensor_n2.json", zm_example()),
        ("nonneg_irreducible_n2.json", nonneg_example()),
        ("biquadratic_psd_n3.json", biquadratic_example()),
        ("identity_n3.json", ElasticityTensor64::identity(3)),
    ];
    for (name, expected) in cases {
        let a: ElasticityTensor64 = read_tensor(&data(name)).unwrap();
        assert_eq!(a, expected, "{name}");
    }
}

#[test]
fn zm_tensor_unfolding_matches_the_printed_matrix() {
    let a = zm_example();
    let rows: Vec<Vec<f64>> = common::ZM_UNFOLDING.iter().map(|r| r.to_vec()).collect();
    let printed = Matrix64::from_rows(&rows);
    assert_eq!(a.unfold(UnfoldMode::X).matrix, printed);
    assert_eq!(a.unfold(UnfoldMode::Y).matrix, printed);
    let eig = SymmetricEigen::new(&printed);
    assert!(close(&eig.values, &common::ZM_UNFOLDING_EIGENVALUES, 1e-4), "{:?}", eig.values);
}

#[test]
fn zm_tensor_real_spectrum() {
    let a = zm_example();
    let spec = enumerate_spectrum(&a, &EnumerateOptions::default()).unwrap();
    let distinct = spec.distinct_eigenvalues(1e-6);
    // every listed value with a real eigenvector pair is found
    assert!(close(&distinct, &[13.4163, 12.1118, 11.2036, 6.1778, 0.2442], 1e-4), "{distinct:?}");
    for p in spec.pairs() {
        assert!(p.residual(&a) < 1e-10);
    }
    let min = power_method_min(&a, &PowerOptions::default()).unwrap().pair;
    assert!((min.lambda - 0.2442).abs() < 1e-4);
    assert!((min.lambda - spec.min().unwrap()).abs() < 1e-9);
}

#[test]
fn zm_tensor_real_minimum_exceeds_the_complex_eigenvalue() {
    // 0.1964 solves the eigen equations only with complex eigenvectors; the
    // biquadratic form on real unit vectors never gets that low
    let a = zm_example();
    let mut lowest = f64::INFINITY;
    let steps = 720;
    for s in 0..steps {
        let t = std::f64::consts::PI * s as f64 / steps as f64;
        for r in 0..steps {
            let u = std::f64::consts::PI * r as f64 / steps as f64;
            let f = a.contract_xxyy(&[t.cos(), t.sin()], &[u.cos(), u.sin()]).unwrap();
            lowest = lowest.min(f);
        }
    }
    assert!(lowest > 0.2441 && lowest < 0.2443, "{lowest}");
}

#[test]
fn zm_tensor_is_a_nonsingular_m_tensor_without_psd_unfolding() {
    let a = zm_example();
    let r = classify(&a, &ClassifyOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::NonsingularM);
    assert_eq!(r.alpha, 13.0);
    assert!(r.discrepancies.is_empty(), "{:?}", r.discrepancies);
    assert!(SymmetricEigen::new(&a.unfold(UnfoldMode::X).matrix).min() < -2.8);
}

#[test]
fn nonnegative_example_perron_pair() {
    let b = nonneg_example();
    assert!(is_irreducible(&b).unwrap().irreducible);
    let out = power_method_max(&b, &PowerOptions::default()).unwrap().pair;
    assert!((out.lambda - 10.9075).abs() < 1e-4);
    let (x, y) = (canonical(&out.x), canonical(&out.y));
    let (p, q) = ([0.2936, 0.9560], [0.9442, 0.3294]);
    assert!((close(&x, &p, 1e-4) && close(&y, &q, 1e-4)) || (close(&x, &q, 1e-4) && close(&y, &p, 1e-4)), "{x:?} {y:?}");
    let rho = spectral_radius_nonneg(&b, &PowerOptions::default()).unwrap().pair;
    assert!((rho.lambda - out.lambda).abs() < 1e-10);
    assert!(rho.x.iter().chain(&rho.y).all(|&c| c > 0.0));
}

#[test]
fn nonnegative_example_has_a_positive_non_perron_pair() {
    let b = nonneg_example();
    let spec = enumerate_spectrum(&b, &EnumerateOptions::default()).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let second = spec
        .pairs()
        .find(|p| (p.lambda - 10.5).abs() < 1e-9)
        .expect("10.5 is an M-eigenvalue");
    assert!(close(&canonical(&second.x), &[h, h], 1e-9));
    assert!(close(&canonical(&second.y), &[h, h], 1e-9));
    // both swapped Perron pairs are present
    let top: Vec<_> = spec.pairs().filter(|p| (p.lambda - spec.max().unwrap()).abs() < 1e-9).collect();
    assert_eq!(top.len(), 2);
}

#[test]
fn biquadratic_example_form_and_unfolding() {
    let a = biquadratic_example();
    let mut r = rng(1);
    for _ in 0..100 {
        let x = random_unit(&mut r, 3);
        let y = random_unit(&mut r, 3);
        assert!((a.contract_xxyy(&x, &y).unwrap() - biquadratic_form(&x, &y)).abs() < 1e-13);
    }
    let printed = common::biquadratic_unfolding();
    assert_eq!(a.unfold(UnfoldMode::X).matrix, printed);
    assert_eq!(a.unfold(UnfoldMode::Y).matrix, printed);
    // rows 2 and 4 hold the block [[0, 1], [1, 0]]
    assert!((SymmetricEigen::new(&printed).min() + 1.0).abs() < 1e-12);
}

#[test]
fn biquadratic_example_is_certified_psd() {
    let a = biquadratic_example();
    let out = pocs_verify(&a, &PocsOptions { epsilon: Some(0.0), max_iter: 10_000, ..PocsOptions::default() }).unwrap();
    assert_eq!(out.status, PocsStatus::CertifiedMPsd);
    let cert = out.certificate.unwrap();
    assert_eq!(cert.terms.len(), 2);
    assert!(cert.reconstruction_error(&a) <= 1e-8);
    let min = power_method_min(&a, &PowerOptions::default()).unwrap().pair.lambda;
    assert!(min.abs() < 1e-8);
    let spec = enumerate_spectrum(&a, &EnumerateOptions::default()).unwrap();
    assert!(spec.entries.iter().any(|e| e.degenerate));
}

#[test]
fn identity_and_its_negative() {
    let e = ElasticityTensor64::identity(3);
    let spec = enumerate_spectrum(&e, &EnumerateOptions::default()).unwrap();
    let distinct = spec.distinct_eigenvalues(1e-9);
    assert_eq!(distinct.len(), 1);
    assert!((distinct[0] - 1.0).abs() < 1e-12);
    let neg: ElasticityTensor64 = read_tensor(&data("neg_identity_n3.json")).unwrap();
    assert_eq!(neg, e.scale(-1.0));
    let min = power_method_min(&neg, &PowerOptions::default()).unwrap().pair.lambda;
    assert!((min + 1.0).abs() < 1e-12);
    assert_eq!(classify(&neg, &ClassifyOptions::default()).unwrap().verdict, Verdict::NotM);
}

#[test]
fn zero_tensor_sits_on_the_boundary() {
    let z: ElasticityTensor64 = read_tensor(&data("zero_n2.json")).unwrap();
    assert!(z.entries().iter().all(|&v| v == 0.0));
    let r = classify(&z, &ClassifyOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::SingularMBoundary);
    assert_eq!(r.alpha, 0.0);
    assert_eq!(r.rho_shift, Some(0.0));
}
