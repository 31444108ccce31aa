#![allow(dead_code)]

use std::path::PathBuf;

use elasticity_se::{ElasticityTensor64, GeneralTensor64, Matrix64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Orbit of `(i,j,k,l)` under `ij` and `kl` swaps, written out by hand so the
/// fixtures do not depend on the library's own orbit code.
fn orbit(i: usize, j: usize, k: usize, l: usize) -> [[usize; 4]; 4] {
    [[i, j, k, l], [j, i, k, l], [i, j, l, k], [j, i, l, k]]
}

/// Builds a tensor from 1-based `(i, j, k, l, value)` entries, each copied over
/// its symmetry orbit.
pub fn from_entries(n: usize, entries: &[(usize, usize, usize, usize, f64)]) -> ElasticityTensor64 {
    let mut raw = vec![0.0; n.pow(4)];
    for &(i, j, k, l, v) in entries {
        for [a, b, c, d] in orbit(i - 1, j - 1, k - 1, l - 1) {
            raw[((a * n + b) * n + c) * n + d] = v;
        }
    }
    ElasticityTensor64::new(n, raw, false).expect("fixture is symmetric")
}

/// Z-tensor whose unfolding is not PSD but which is M-positive definite.
pub fn zm_example() -> ElasticityTensor64 {
    from_entries(
        2,
        &[
            (1, 1, 1, 1, 13.0),
            (1, 1, 2, 2, 2.0),
            (2, 2, 1, 1, 2.0),
            (2, 2, 2, 2, 12.0),
            (1, 1, 1, 2, -2.0),
            (1, 2, 1, 1, -2.0),
            (1, 2, 1, 2, -4.0),
            (1, 2, 2, 2, -1.0),
            (2, 2, 1, 2, -1.0),
        ],
    )
}

pub const ZM_UNFOLDING: [[f64; 4]; 4] =
    [[13.0, -2.0, -2.0, -4.0], [-2.0, 2.0, -4.0, -1.0], [-2.0, -4.0, 2.0, -1.0], [-4.0, -1.0, -1.0, 12.0]];

pub const ZM_UNFOLDING_EIGENVALUES: [f64; 4] = [-2.8331, 6.0000, 9.2221, 16.6110];

/// Nonnegative irreducible tensor with a non-Perron positive eigenpair at 10.5.
pub fn nonneg_example() -> ElasticityTensor64 {
    from_entries(
        2,
        &[
            (1, 1, 1, 1, 4.0),
            (1, 1, 2, 2, 10.0),
            (2, 2, 1, 1, 10.0),
            (2, 2, 2, 2, 2.0),
            (1, 1, 1, 2, 1.0),
            (1, 2, 1, 1, 1.0),
            (1, 2, 1, 2, 1.0),
            (1, 2, 2, 2, 2.0),
            (2, 2, 1, 2, 2.0),
        ],
    )
}

/// M-PSD tensor with `A x² y² = 2 (x₁y₁ + x₂y₂)² + 2 x₃² y₃²`.
pub fn biquadratic_example() -> ElasticityTensor64 {
    from_entries(3, &[(1, 1, 1, 1, 2.0), (2, 2, 2, 2, 2.0), (3, 3, 3, 3, 2.0), (1, 2, 1, 2, 1.0)])
}

pub fn biquadratic_form(x: &[f64], y: &[f64]) -> f64 {
    2.0 * (x[0] * y[0] + x[1] * y[1]).powi(2) + 2.0 * x[2].powi(2) * y[2].powi(2)
}

/// Rows of the 9 × 9 unfolding as printed for the biquadratic example.
pub fn biquadratic_unfolding() -> Matrix64 {
    let mut m = vec![vec![0.0; 9]; 9];
    m[0][0] = 2.0;
    m[0][4] = 1.0;
    m[1][3] = 1.0;
    m[3][1] = 1.0;
    m[4][0] = 1.0;
    m[4][4] = 2.0;
    m[8][8] = 2.0;
    Matrix64::from_rows(&m)
}

/// Symmetric tensor with orbit-averaged entries drawn from `[lo, hi)`.
pub fn random_tensor(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> ElasticityTensor64 {
    let raw: Vec<f64> = (0..n.pow(4)).map(|_| rng.random_range(lo..hi)).collect();
    ElasticityTensor64::new(n, raw, true).expect("orbit averaging symmetrizes")
}

/// Nonnegative symmetric tensor; roughly `sparsity` of the orbits are zero.
pub fn random_nonneg(rng: &mut impl Rng, n: usize, sparsity: f64) -> ElasticityTensor64 {
    let mut raw = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                for l in k..n {
                    let v = if rng.random::<f64>() < sparsity { 0.0 } else { rng.random::<f64>() };
                    for [a, b, c, d] in orbit(i, j, k, l) {
                        raw[((a * n + b) * n + c) * n + d] = v;
                    }
                }
            }
        }
    }
    ElasticityTensor64::new(n, raw, false).expect("orbit fill is symmetric")
}

pub fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|c| c / norm).collect();
        }
    }
}

/// General tensor whose x-unfolding is a random symmetric matrix.
pub fn random_general(rng: &mut impl Rng, n: usize) -> GeneralTensor64 {
    let m = Matrix64::from_fn(n * n, n * n, |_, _| rng.random_range(-1.0..1.0));
    GeneralTensor64::fold_x(n, &m.symmetric_part())
}

/// Symmetric part of a tensor whose unfolding is a sum of `terms` random
/// rank-one PSD matrices, plus `shift · E`. Feasible for POCS by construction.
pub fn random_sos(rng: &mut impl Rng, n: usize, terms: usize, shift: f64) -> ElasticityTensor64 {
    let m = n * n;
    let mut u = Matrix64::zeros(m, m);
    for _ in 0..terms {
        let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        for p in 0..m {
            for q in 0..m {
                u[(p, q)] += v[p] * v[q];
            }
        }
    }
    GeneralTensor64::fold_x(n, &u).symmetric_part().shift(1.0, shift)
}

pub fn naive_xxyy(a: &ElasticityTensor64, x: &[f64], y: &[f64]) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    s += a.get(i, j, k, l) * x[i] * x[j] * y[k] * y[l];
                }
            }
        }
    }
    s
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Flips `v` so its largest-magnitude component is positive.
pub fn canonical(v: &[f64]) -> Vec<f64> {
    let pivot = v.iter().copied().fold(0.0f64, |m, c| if c.abs() > m.abs() { c } else { m });
    if pivot < 0.0 {
        v.iter().map(|c| -c).collect()
    } else {
        v.to_vec()
    }
}

/// Proptest config without on-disk regression files, which need a `lib.rs`
/// next to the test source.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}

/// Checks that `shifted` is the spectrum of `α (A + β E)` given `orig` for `A`:
/// the same number of pairs, each `λ ↦ α (λ + β)` within `tol` and eigenvectors
/// aligned above `1 − tol`. Degenerate entries are matched on `λ` only.
pub fn shifted_spectrum_matches(
    orig: &elasticity_se::MSpectrum<f64>,
    shifted: &elasticity_se::MSpectrum<f64>,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<(), String> {
    if orig.entries.len() != shifted.entries.len() {
        return Err(format!(
            "pair counts differ: {:?} vs {:?}",
            orig.eigenvalues(),
            shifted.eigenvalues()
        ));
    }
    for s in &shifted.entries {
        let hit = orig.entries.iter().any(|o| {
            let mapped = alpha * (o.pair.lambda + beta);
            let close = (mapped - s.pair.lambda).abs() <= tol * mapped.abs().max(1.0);
            close && (s.degenerate || o.degenerate || o.pair.alignment(&s.pair) > 1.0 - tol)
        });
        if !hit {
            return Err(format!("no preimage for λ = {} (x = {:?}, y = {:?})", s.pair.lambda, s.pair.x, s.pair.y));
        }
    }
    Ok(())
}

/// `s E − B` for a random nonnegative `B` with `s = ρ_M(B) · factor`. Returns
/// the tensor and `ρ_M(B)`.
pub fn z_tensor(rng: &mut impl Rng, n: usize, factor: f64) -> (ElasticityTensor64, f64) {
    let b = random_nonneg(rng, n, 0.2);
    let rho = elasticity_se::spectral_radius_nonneg(&b, &elasticity_se::PowerOptions::default())
        .expect("nonnegative tensor")
        .pair
        .lambda;
    (b.shift(-1.0, -rho * factor), rho)
}
