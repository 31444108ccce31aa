//! Elasticity Z- and M-tensors.
//!
//! Entries `a_iikk` are diagonal, all others off-diagonal. A Z-tensor has
//! non-positive off-diagonal entries and can be written `sE − B` with
//! `B ≥ 0`; it is a nonsingular M-tensor when `s > ρ_M(B)`. For Z-tensors
//! the conditions C1–C13 below are all equivalent to that, and to strong
//! ellipticity.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{normalized, solve, Matrix, SymmetricEigen};
use crate::meig::{
    enumerate_spectrum, power_method_min, spectral_radius_nonneg, EnumerateOptions, PowerDiagnostics, PowerOptions, PowerOutcome,
};
use crate::scalar::Scalar;
use crate::tensor::{ElasticityTensor, FourthOrder};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZViolation {
    /// 1-based index of the orbit representative.
    pub index: [usize; 4],
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZPattern {
    pub is_z: bool,
    /// One entry per symmetry orbit with `i ≤ j`, `k ≤ l`.
    pub violations: Vec<ZViolation>,
}

/// Lists off-diagonal entries above `z_tol`.
pub fn z_pattern<T: Scalar>(a: &ElasticityTensor<T>, z_tol: f64) -> ZPattern {
    let n = a.n();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                for l in k..n {
                    if ElasticityTensor::<T>::is_diagonal_index([i, j, k, l]) {
                        continue;
                    }
                    let v = a.get(i, j, k, l).as_f64();
                    if v > z_tol {
                        violations.push(ZViolation { index: [i + 1, j + 1, k + 1, l + 1], value: v });
                    }
                }
            }
        }
    }
    ZPattern { is_z: violations.is_empty(), violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NotZ,
    NonsingularM,
    SingularMBoundary,
    NotM,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::NotZ => "NOT_Z",
            Self::NonsingularM => "NONSINGULAR_M",
            Self::SingularMBoundary => "SINGULAR_M_BOUNDARY",
            Self::NotM => "NOT_M",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConditionId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
}

impl ConditionId {
    pub const ALL: [ConditionId; 13] = [
        Self::C1,
        Self::C2,
        Self::C3,
        Self::C4,
        Self::C5,
        Self::C6,
        Self::C7,
        Self::C8,
        Self::C9,
        Self::C10,
        Self::C11,
        Self::C12,
        Self::C13,
    ];

    /// Conditions decided by a full computation rather than sampling.
    pub fn is_decisive(self) -> bool {
        matches!(self, Self::C1 | Self::C2 | Self::C3 | Self::C4 | Self::C5)
    }

    /// C2 and C4 characterize strong ellipticity for any tensor; the rest
    /// presuppose the Z-pattern.
    pub fn needs_z(self) -> bool {
        !matches!(self, Self::C2 | Self::C4)
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::C1 => "sE - A is nonnegative with s > rho_M(sE - A), s = alpha + 1",
            Self::C2 => "A is M-positive definite",
            Self::C3 => "min A x^2 y^2 over nonnegative unit x, y is positive",
            Self::C4 => "all M-eigenvalues are positive",
            Self::C5 => "alpha > rho_M(alpha E - A)",
            Self::C6 => "A x^2 is a nonsingular M-matrix for x >= 0",
            Self::C7 => "for x >= 0 some y > 0 has A x^2 y > 0",
            Self::C8 => "for x >= 0 some y >= 0 has A x^2 y > 0",
            Self::C9 => "for x >= 0 some positive diagonal D makes D (A x^2) D strictly diagonally dominant",
            Self::C10 => "A y^2 is a nonsingular M-matrix for y >= 0",
            Self::C11 => "for y >= 0 some x > 0 has A x y^2 > 0",
            Self::C12 => "for y >= 0 some x >= 0 has A x y^2 > 0",
            Self::C13 => "for y >= 0 some positive diagonal D makes D (A y^2) D strictly diagonally dominant",
        }
    }

    fn matrix_side(self) -> Option<Side> {
        match self {
            Self::C6 | Self::C7 | Self::C8 | Self::C9 => Some(Side::X),
            Self::C10 | Self::C11 | Self::C12 | Self::C13 => Some(Side::Y),
            _ => None,
        }
    }
}

impl std::fmt::Display for ConditionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    /// No counterexample among the samples; not a proof.
    PassSampled,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub id: ConditionId,
    pub status: ConditionStatus,
    /// The quantity that decided a decisive condition (a margin or an
    /// eigenvalue).
    pub value: Option<f64>,
    /// Sample vector that falsified a sampled condition, or the eigenvector
    /// pair `x ++ y` behind a failing eigenvalue condition.
    pub witness: Option<Vec<f64>>,
    pub samples_used: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOptions {
    pub z_tol: f64,
    /// α vs ρ tolerance relative to `max(1, |α|)`.
    pub margin_tol: f64,
    pub power: PowerOptions,
    pub n_samples: usize,
    pub seed: u64,
    /// Whether C4 also enumerates the spectrum (n ≤ 3 only).
    pub enumerate: bool,
    pub enumerate_opts: EnumerateOptions,
    /// Whether `classify` runs the C1–C13 battery.
    pub battery: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            z_tol: 0.0,
            margin_tol: 1e-8,
            power: PowerOptions::default(),
            n_samples: 1000,
            seed: 42,
            enumerate: true,
            enumerate_opts: EnumerateOptions::default(),
            battery: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub z_pattern: ZPattern,
    /// Largest diagonal entry.
    pub alpha: f64,
    /// `ρ_M(αE − A)`; absent for non-Z tensors.
    pub rho_shift: Option<f64>,
    pub verdict: Verdict,
    /// `α − ρ_shift`.
    pub margin: Option<f64>,
    pub margin_tol: f64,
    /// Smallest M-eigenvalue found by the power method.
    pub min_m_eigenvalue: Option<f64>,
    pub conditions: BTreeMap<ConditionId, ConditionResult>,
    /// Disagreements between conditions that are proven equivalent.
    pub discrepancies: Vec<String>,
    pub rho_diagnostics: Option<PowerDiagnostics>,
}

fn shifted_nonneg<T: Scalar>(a: &ElasticityTensor<T>, s: T) -> ElasticityTensor<T> {
    // sE − A; entries of a Z-tensor within z_tol of zero may come out as tiny
    // negatives and are clamped
    let b = a.shift(T::one(), -s).scale(-T::one());
    let data: Vec<T> = b.entries().iter().map(|&v| v.max(T::zero())).collect();
    ElasticityTensor::new(a.n(), data, false).expect("clamping preserves symmetry")
}

fn alpha_of<T: Scalar>(a: &ElasticityTensor<T>) -> T {
    let d = a.diagonal();
    d.as_slice().iter().copied().fold(T::neg_infinity(), T::max)
}

/// Places `A` on the Z / M ladder using `α > ρ_M(αE − A)`, then (unless
/// disabled) runs the C1–C13 battery.
pub fn classify<T: Scalar>(a: &ElasticityTensor<T>, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let z = z_pattern(a, opts.z_tol);
    let alpha = alpha_of(a);
    let margin_tol = opts.margin_tol * alpha.as_f64().abs().max(1.0);
    let mut cache = Cache::default();
    let min_m_eigenvalue = cache.min(a, opts)?.pair.lambda.as_f64();

    let (verdict, rho_shift, margin, rho_diagnostics) = if z.is_z {
        let rho = cache.rho_alpha(a, alpha, opts)?.clone();
        let r = rho.pair.lambda.as_f64();
        let m = alpha.as_f64() - r;
        let v = if m > margin_tol {
            Verdict::NonsingularM
        } else if m < -margin_tol {
            Verdict::NotM
        } else {
            Verdict::SingularMBoundary
        };
        (v, Some(r), Some(m), Some(rho.diagnostics))
    } else {
        (Verdict::NotZ, None, None, None)
    };

    let mut report = ClassificationReport {
        n: a.n(),
        z_pattern: z,
        alpha: alpha.as_f64(),
        rho_shift,
        verdict,
        margin,
        margin_tol,
        min_m_eigenvalue: Some(min_m_eigenvalue),
        conditions: BTreeMap::new(),
        discrepancies: Vec::new(),
        rho_diagnostics,
    };
    if opts.battery {
        run_battery(a, opts, &mut report, &mut cache)?;
    }
    Ok(report)
}

/// Solver results shared between the verdict and the conditions that reuse
/// them.
struct Cache<T> {
    min: Option<PowerOutcome<T>>,
    rho_alpha: Option<PowerOutcome<T>>,
}

impl<T> Default for Cache<T> {
    fn default() -> Self {
        Self { min: None, rho_alpha: None }
    }
}

impl<T: Scalar> Cache<T> {
    fn min(&mut self, a: &ElasticityTensor<T>, opts: &ClassifyOptions) -> Result<&PowerOutcome<T>> {
        if self.min.is_none() {
            self.min = Some(power_method_min(a, &opts.power)?);
        }
        Ok(self.min.as_ref().expect("just filled"))
    }

    fn rho_alpha(&mut self, a: &ElasticityTensor<T>, alpha: T, opts: &ClassifyOptions) -> Result<&PowerOutcome<T>> {
        if self.rho_alpha.is_none() {
            self.rho_alpha = Some(spectral_radius_nonneg(&shifted_nonneg(a, alpha), &opts.power)?);
        }
        Ok(self.rho_alpha.as_ref().expect("just filled"))
    }
}

fn run_battery<T: Scalar>(
    a: &ElasticityTensor<T>,
    opts: &ClassifyOptions,
    report: &mut ClassificationReport,
    cache: &mut Cache<T>,
) -> Result<()> {
    for id in ConditionId::ALL {
        let result = match check_condition_cached(a, id, opts, cache) {
            Ok(r) => r,
            Err(Error::ConditionInapplicable { reason, .. }) => ConditionResult {
                id,
                status: ConditionStatus::Skipped,
                value: None,
                witness: None,
                samples_used: 0,
                detail: reason,
            },
            Err(e) => return Err(e),
        };
        report.conditions.insert(id, result);
    }

    if report.z_pattern.is_z {
        let expected_pass = report.verdict == Verdict::NonsingularM;
        for r in report.conditions.values() {
            let passed = matches!(r.status, ConditionStatus::Pass | ConditionStatus::PassSampled);
            let decided = r.status != ConditionStatus::Skipped;
            // sampled passes carry no information against a negative verdict
            let contradicts = if r.id.is_decisive() { passed != expected_pass } else { expected_pass && !passed };
            if decided && contradicts {
                report.discrepancies.push(format!(
                    "{} is {:?} but the verdict is {}",
                    r.id, r.status, report.verdict
                ));
            }
        }
    } else if let (Some(c2), Some(c4)) = (report.conditions.get(&ConditionId::C2), report.conditions.get(&ConditionId::C4)) {
        if c2.status != c4.status {
            report.discrepancies.push(format!("C2 is {:?} but C4 is {:?}", c2.status, c4.status));
        }
    }
    Ok(())
}

fn decisive(id: ConditionId, value: f64, tol: f64, detail: String, witness: Option<Vec<f64>>) -> ConditionResult {
    let pass = value > tol;
    ConditionResult {
        id,
        status: if pass { ConditionStatus::Pass } else { ConditionStatus::Fail },
        value: Some(value),
        witness: if pass { None } else { witness },
        samples_used: 0,
        detail,
    }
}

/// Evaluates one condition. Decisive conditions (C1–C5) return `Pass` or
/// `Fail`; sampled ones (C6–C13) return `PassSampled` or `Fail` with the
/// falsifying sample as witness.
pub fn check_condition<T: Scalar>(a: &ElasticityTensor<T>, id: ConditionId, opts: &ClassifyOptions) -> Result<ConditionResult> {
    check_condition_cached(a, id, opts, &mut Cache::default())
}

fn check_condition_cached<T: Scalar>(
    a: &ElasticityTensor<T>,
    id: ConditionId,
    opts: &ClassifyOptions,
    cache: &mut Cache<T>,
) -> Result<ConditionResult> {
    if id.needs_z() {
        let z = z_pattern(a, opts.z_tol);
        if !z.is_z {
            return Err(Error::ConditionInapplicable {
                id: id.to_string(),
                reason: format!("{} positive off-diagonal orbit(s); the tensor is not a Z-tensor", z.violations.len()),
            });
        }
    }
    let alpha = alpha_of(a);
    let tol = opts.margin_tol * alpha.as_f64().abs().max(1.0);
    let pair_witness = |x: &[T], y: &[T]| Some(x.iter().chain(y).map(|v| v.as_f64()).collect());

    match id {
        ConditionId::C1 | ConditionId::C5 => {
            let (s, rho) = if id == ConditionId::C1 {
                let s = alpha + T::one();
                (s, spectral_radius_nonneg(&shifted_nonneg(a, s), &opts.power)?.pair.lambda)
            } else {
                (alpha, cache.rho_alpha(a, alpha, opts)?.pair.lambda)
            };
            let m = (s - rho).as_f64();
            Ok(decisive(id, m, tol, format!("s = {s}, rho_M(sE - A) = {rho}"), None))
        }
        ConditionId::C2 => {
            let min = cache.min(a, opts)?;
            let w = pair_witness(&min.pair.x, &min.pair.y);
            Ok(decisive(id, min.pair.lambda.as_f64(), tol, format!("min of A x^2 y^2 on unit spheres = {}", min.pair.lambda), w))
        }
        ConditionId::C3 => {
            let tau = T::one() + a.sum_abs();
            let rho = spectral_radius_nonneg(&shifted_nonneg(a, tau), &opts.power)?;
            let m = tau - rho.pair.lambda;
            let w = pair_witness(&rho.pair.x, &rho.pair.y);
            Ok(decisive(id, m.as_f64(), tol, format!("min over nonnegative unit pairs = {m}"), w))
        }
        ConditionId::C4 => {
            let min = cache.min(a, opts)?.clone();
            let mut lambda = min.pair.lambda;
            let mut w = pair_witness(&min.pair.x, &min.pair.y);
            let mut detail = format!("power method min = {lambda}");
            if opts.enumerate && a.n() <= 3 {
                let spec = enumerate_spectrum(a, &opts.enumerate_opts)?;
                if let Some(last) = spec.entries.last() {
                    detail.push_str(&format!(", enumerated min = {}", last.pair.lambda));
                    if last.pair.lambda < lambda {
                        lambda = last.pair.lambda;
                        w = pair_witness(&last.pair.x, &last.pair.y);
                    }
                }
            }
            Ok(decisive(id, lambda.as_f64(), tol, detail, w))
        }
        _ => sampled(a, id, opts),
    }
}

/// Nonnegative unit sample vectors: coordinate vectors, the normalized
/// all-ones vector, then `|N(0, I)|` draws.
pub fn nonnegative_samples<T: Scalar>(n: usize, count: usize, seed: u64) -> Vec<Vec<T>> {
    let mut out = Vec::with_capacity(count);
    for i in 0..n.min(count) {
        let mut e = vec![T::zero(); n];
        e[i] = T::one();
        out.push(e);
    }
    if out.len() < count {
        out.push(vec![T::one() / T::lit(n as f64).sqrt(); n]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let v: Vec<T> = (0..n).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal).abs())).collect();
        if let Some(u) = normalized(&v) {
            out.push(u);
        }
    }
    out
}

fn side_matrix<T: Scalar>(a: &ElasticityTensor<T>, side: Side, v: &[T]) -> Matrix<T> {
    match side {
        Side::X => a.partial_xx_unchecked(v),
        Side::Y => a.partial_yy_unchecked(v),
    }
}

/// `None` when the sample satisfies the condition, else a reason.
fn sample_failure<T: Scalar>(a: &ElasticityTensor<T>, id: ConditionId, v: &[T]) -> Option<String> {
    let side = id.matrix_side().expect("sampled condition");
    let m = side_matrix(a, side, v);
    let n = m.rows();
    let scale = T::one().max(m.max_abs());
    let tiny = T::lit(1e-12) * scale;
    match id {
        ConditionId::C6 | ConditionId::C10 => match is_nonsingular_m_matrix(&m) {
            Ok(r) if r.nonsingular_m => None,
            Ok(r) => Some(r.reason),
            Err(e) => Some(e.to_string()),
        },
        _ => {
            let ones = vec![T::one(); n];
            let Some(y) = solve(&m, &ones) else {
                return Some("matrix is singular".into());
            };
            let my = m.matvec(&y);
            if my.iter().any(|&r| !(r > T::lit(0.5))) {
                return Some("solve of M y = 1 is inaccurate".into());
            }
            match id {
                ConditionId::C7 | ConditionId::C11 => {
                    (!y.iter().all(|&c| c > tiny)).then(|| format!("solution of M y = 1 is not positive: {y:?}"))
                }
                ConditionId::C8 | ConditionId::C12 => {
                    (!y.iter().all(|&c| c >= -tiny)).then(|| format!("solution of M y = 1 is not nonnegative: {y:?}"))
                }
                _ => {
                    if !y.iter().all(|&c| c > tiny) {
                        return Some(format!("no positive scaling: solution of M y = 1 is {y:?}"));
                    }
                    let dmd = Matrix::from_fn(n, n, |r, c| y[r] * m[(r, c)] * y[c]);
                    (0..n)
                        .find(|&r| {
                            let off: T = (0..n).filter(|&c| c != r).map(|c| dmd[(r, c)].abs()).sum();
                            dmd[(r, r)].abs() <= off
                        })
                        .map(|r| format!("row {} of D M D is not strictly diagonally dominant", r + 1))
                }
            }
        }
    }
}

fn sampled<T: Scalar>(a: &ElasticityTensor<T>, id: ConditionId, opts: &ClassifyOptions) -> Result<ConditionResult> {
    if opts.n_samples == 0 {
        return Err(Error::InvalidOption("sample count must be positive".into()));
    }
    let samples = nonnegative_samples::<T>(a.n(), opts.n_samples, opts.seed);
    for (used, v) in samples.iter().enumerate() {
        if let Some(reason) = sample_failure(a, id, v) {
            return Ok(ConditionResult {
                id,
                status: ConditionStatus::Fail,
                value: None,
                witness: Some(v.iter().map(|c| c.as_f64()).collect()),
                samples_used: used + 1,
                detail: reason,
            });
        }
    }
    Ok(ConditionResult {
        id,
        status: ConditionStatus::PassSampled,
        value: None,
        witness: None,
        samples_used: samples.len(),
        detail: format!("no counterexample among {} samples", samples.len()),
    })
}

/// Re-evaluates a sampled condition at a stored witness; true when the
/// failure reproduces.
pub fn recheck_witness<T: Scalar>(a: &ElasticityTensor<T>, id: ConditionId, witness: &[f64]) -> Result<bool> {
    if id.is_decisive() {
        return Err(Error::InvalidOption(format!("{id} has no sample witness")));
    }
    if witness.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: witness.len() });
    }
    let v: Vec<T> = witness.iter().map(|&c| T::lit(c)).collect();
    Ok(sample_failure(a, id, &v).is_some())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MMatrixCheck {
    pub nonsingular_m: bool,
    pub min_eigenvalue: f64,
    /// 0-based position of a positive off-diagonal entry.
    pub positive_off_diagonal: Option<(usize, usize)>,
    pub reason: String,
}

/// A symmetric Z-matrix is a nonsingular M-matrix iff it is positive
/// definite.
pub fn is_nonsingular_m_matrix<T: Scalar>(m: &Matrix<T>) -> Result<MMatrixCheck> {
    let asym = m.asymmetry();
    if asym > T::lit(1e-10) * T::one().max(m.max_abs()) {
        return Err(Error::Asymmetric(asym.as_f64()));
    }
    let n = m.rows();
    let off = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).find(|&(r, c)| r != c && m[(r, c)] > T::zero());
    let min_eig = SymmetricEigen::new(m).min();
    let (ok, reason) = match off {
        Some((r, c)) => (false, format!("positive off-diagonal entry {} at ({}, {})", m[(r, c)], r + 1, c + 1)),
        None if min_eig > T::zero() => (true, "positive definite Z-matrix".into()),
        None => (false, format!("min eigenvalue {min_eig} is not positive")),
    };
    Ok(MMatrixCheck { nonsingular_m: ok, min_eigenvalue: min_eig.as_f64(), positive_off_diagonal: off, reason })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_matrix_examples() {
        assert!(is_nonsingular_m_matrix(&Matrix::<f64>::identity(3)).unwrap().nonsingular_m);
        let ok = Matrix::from_rows(&[vec![13.0, -2.0], vec![-2.0, 2.0]]);
        let r = is_nonsingular_m_matrix(&ok).unwrap();
        assert!(r.nonsingular_m);
        assert!((r.min_eigenvalue - (7.5 - 30.25f64.sqrt() * (1.0f64 + 16.0 / 121.0).sqrt())).abs() < 1e-12);
        let bad = Matrix::from_rows(&[vec![1.0, -2.0], vec![-2.0, 1.0]]);
        let r = is_nonsingular_m_matrix(&bad).unwrap();
        assert!(!r.nonsingular_m);
        assert!((r.min_eigenvalue + 1.0).abs() < 1e-12);
        let asym = Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0]]);
        assert!(matches!(is_nonsingular_m_matrix(&asym), Err(Error::Asymmetric(_))));
    }

    #[test]
    fn identity_is_nonsingular_m() {
        let e = ElasticityTensor::<f64>::identity(2);
        assert!(z_pattern(&e, 0.0).is_z);
        let r = classify(&e, &ClassifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NonsingularM);
        assert_eq!(r.rho_shift, Some(0.0));
        assert!(r.discrepancies.is_empty(), "{:?}", r.discrepancies);
    }

    #[test]
    fn zero_tensor_is_boundary() {
        let r = classify(&ElasticityTensor::<f64>::zeros(2), &ClassifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::SingularMBoundary);
        assert!(r.discrepancies.is_empty(), "{:?}", r.discrepancies);
    }

    #[test]
    fn negative_identity_fails_c2() {
        let a = ElasticityTensor::<f64>::identity(2).scale(-1.0);
        let r = check_condition(&a, ConditionId::C2, &ClassifyOptions::default()).unwrap();
        assert_eq!(r.status, ConditionStatus::Fail);
        assert!((r.value.unwrap() + 1.0).abs() < 1e-10);
    }

    #[test]
    fn z_only_conditions_reject_non_z() {
        let a = ElasticityTensor::<f64>::from_fn(2, |_, _, _, _| 1.0).unwrap();
        assert!(!z_pattern(&a, 0.0).is_z);
        assert!(matches!(check_condition(&a, ConditionId::C5, &ClassifyOptions::default()), Err(Error::ConditionInapplicable { .. })));
        assert!(z_pattern(&a, 1.5).is_z);
    }

    #[test]
    fn samples_start_with_coordinates_and_ones() {
        let s = nonnegative_samples::<f64>(3, 10, 42);
        assert_eq!(s.len(), 10);
        assert_eq!(s[0], vec![1.0, 0.0, 0.0]);
        assert!((s[3][0] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(s.iter().all(|v| v.iter().all(|&c| c >= 0.0)));
    }
}
