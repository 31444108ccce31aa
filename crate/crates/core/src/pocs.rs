//! Alternating projections between the affine class
//!
//! ```text
//! T_A = { T : t_ijkl = t_jilk,  t_ijkl + t_jikl = 2 a_ijkl }
//! ```
//!
//! and the cone S of weakly symmetric tensors with a PSD x-unfolding. Every
//! member of `T_A` has the same biquadratic form as `A`, so a point in the
//! intersection writes `A x² y²` as a sum of squares and proves `A` is
//! M-PSD. Running on `A − εE` with `ε > 0` proves `A x² y² ≥ ε`.
//!
//! An empty intersection proves nothing: the condition is sufficient only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymmetricEigen};
use crate::scalar::Scalar;
use crate::tensor::{ElasticityTensor, FourthOrder, GeneralTensor4, UnfoldMode};

/// Orthogonal projection of `t` onto `T_A`.
///
/// Per index `(i, j, k, l)` the result is `a_ijkl + (p − q) / 2` with
/// `p = (t_ijkl + t_jilk) / 2` and `q = (t_jikl + t_ijlk) / 2`: the weakly
/// symmetric skew part of `t` survives and the symmetric part is reset to
/// `a`. When `i = j` or `k = l` the skew part vanishes and the entry is
/// `a_ijkl`.
pub fn project_affine<T: Scalar>(t: &GeneralTensor4<T>, a: &ElasticityTensor<T>) -> Result<GeneralTensor4<T>> {
    let n = a.n();
    if t.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.n() });
    }
    let half = T::lit(0.5);
    let mut out = GeneralTensor4::zeros(n);
    let data = out.data_mut();
    let mut pos = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let p = half * (t.get(i, j, k, l) + t.get(j, i, l, k));
                    let q = half * (t.get(j, i, k, l) + t.get(i, j, l, k));
                    data[pos] = a.get(i, j, k, l) + half * (p - q);
                    pos += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Projection onto S: clips the negative eigenvalues of the x-unfolding.
pub fn project_psd<T: Scalar>(t: &GeneralTensor4<T>) -> Result<GeneralTensor4<T>> {
    let unfolded = t.unfold(UnfoldMode::X).matrix;
    let asym = unfolded.asymmetry();
    if asym > T::lit(1e-10) * T::one().max(unfolded.max_abs()) {
        return Err(Error::AsymmetricUnfolding(asym.as_f64()));
    }
    let eig = SymmetricEigen::new(&unfolded);
    let clipped = eig.reconstruct_with(|d| d.max(T::zero()));
    Ok(GeneralTensor4::fold_x(t.n(), &clipped.symmetric_part()))
}

#[derive(Debug, Clone, Serialize)]
pub struct PocsOptions {
    /// Strictness shift ε ≥ 0; defaults to `1e-6 · max |a_iikk|`.
    pub epsilon: Option<f64>,
    pub max_iter: usize,
    /// Convergence threshold on `‖A_t − B_t‖_F`, relative to
    /// `max(1, ‖A‖_F)`.
    pub residual_tol: f64,
    /// Window over which a relative decrease below `1e-12` counts as stalled.
    pub stall_window: usize,
    /// Entrywise reconstruction tolerance for certificates, relative to
    /// `max(1, max|a_ijkl|)`.
    pub certificate_tol: f64,
}

impl Default for PocsOptions {
    fn default() -> Self {
        Self { epsilon: None, max_iter: 50_000, residual_tol: 1e-10, stall_window: 200, certificate_tol: 1e-8 }
    }
}

/// Default strictness shift for `a`.
pub fn default_epsilon<T: Scalar>(a: &ElasticityTensor<T>) -> f64 {
    let d = a.diagonal();
    1e-6 * d.max_abs().as_f64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PocsStatus {
    CertifiedMPsd,
    CertifiedMPd,
    Inconclusive,
}

impl std::fmt::Display for PocsStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::CertifiedMPsd => "CERTIFIED_M_PSD",
            Self::CertifiedMPd => "CERTIFIED_M_PD",
            Self::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    Stalled,
    MaxIter,
    /// Converged, but the extracted certificate failed its reconstruction
    /// check.
    CertificateRejected,
}

#[derive(Debug, Clone, Serialize)]
pub struct PocsDiagnostics {
    pub epsilon: f64,
    /// Affine projections performed.
    pub iterations: usize,
    pub residual: f64,
    pub residual_tol: f64,
    pub stop: StopReason,
    /// Smallest eigenvalue of the final `T_A` iterate's unfolding.
    pub min_unfolding_eigenvalue: f64,
    /// `‖P_T(B) − B‖_F` for the final PSD iterate `B`.
    pub membership_residual: f64,
    /// `‖A_t − B_t‖_F` for every t.
    #[serde(skip)]
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct PocsOutcome<T> {
    pub status: PocsStatus,
    pub certificate: Option<PsdCertificate<T>>,
    pub diagnostics: PocsDiagnostics,
}

fn distance<T: Scalar>(u: &GeneralTensor4<T>, v: &GeneralTensor4<T>) -> T {
    u.sub(v).frobenius_norm()
}

/// Runs POCS on `A − εE` from `A⁰ = A − εE`, projecting onto S first.
pub fn pocs_verify<T: Scalar>(a: &ElasticityTensor<T>, opts: &PocsOptions) -> Result<PocsOutcome<T>> {
    let eps = opts.epsilon.unwrap_or_else(|| default_epsilon(a));
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidOption(format!("epsilon must be a finite value >= 0, got {eps}")));
    }
    if !(opts.residual_tol > 0.0) || opts.stall_window == 0 {
        return Err(Error::InvalidOption("residual tolerance and stall window must be positive".into()));
    }
    let target = a.shift(T::one(), -T::lit(eps));
    let tol = opts.residual_tol * a.frobenius_norm().as_f64().max(1.0);

    let mut at = target.to_general();
    let mut history = Vec::new();
    let mut iterations = 0;
    let stop;
    let mut bt;
    loop {
        bt = project_psd(&at)?;
        let residual = distance(&at, &bt).as_f64();
        history.push(residual);
        if residual <= tol {
            stop = StopReason::Converged;
            break;
        }
        let t = history.len() - 1;
        if t >= opts.stall_window {
            let before = history[t - opts.stall_window];
            if before - residual < 1e-12 * before {
                stop = StopReason::Stalled;
                break;
            }
        }
        if iterations >= opts.max_iter {
            stop = StopReason::MaxIter;
            break;
        }
        at = project_affine(&bt, &target)?;
        iterations += 1;
    }

    let membership = distance(&project_affine(&bt, &target)?, &bt).as_f64();
    let min_eig = SymmetricEigen::new(&at.unfold(UnfoldMode::X).matrix).min().as_f64();
    let mut diagnostics = PocsDiagnostics {
        epsilon: eps,
        iterations,
        residual: *history.last().expect("at least one residual"),
        residual_tol: tol,
        stop,
        min_unfolding_eigenvalue: min_eig,
        membership_residual: membership,
        history,
    };

    if stop != StopReason::Converged {
        return Ok(PocsOutcome { status: PocsStatus::Inconclusive, certificate: None, diagnostics });
    }
    let cert = extract_certificate(&bt, T::lit(eps))?;
    let err = cert.reconstruction_error(a).as_f64();
    if err > opts.certificate_tol * a.max_abs().as_f64().max(1.0) {
        diagnostics.stop = StopReason::CertificateRejected;
        return Ok(PocsOutcome { status: PocsStatus::Inconclusive, certificate: None, diagnostics });
    }
    let status = if eps > 0.0 { PocsStatus::CertifiedMPd } else { PocsStatus::CertifiedMPsd };
    Ok(PocsOutcome { status, certificate: Some(cert), diagnostics })
}

/// One term `α U` of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct CertificateTerm<T> {
    pub alpha: T,
    #[serde(rename = "U")]
    pub u: Matrix<T>,
}

/// Sum-of-rank-one representation
///
/// ```text
/// a_ijkl = ½ Σ_s α_s (u_ik u_jl + u_jk u_il) + ε e_ijkl
/// ```
///
/// which gives `A x² y² = Σ_s α_s (xᵀ U_s y)² + ε (xᵀx)(yᵀy)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct PsdCertificate<T> {
    pub epsilon: T,
    pub terms: Vec<CertificateTerm<T>>,
}

impl<T: Scalar> PsdCertificate<T> {
    /// Rebuilds the tensor the certificate represents.
    pub fn reconstruct(&self, n: usize) -> ElasticityTensor<T> {
        let half = T::lit(0.5);
        let base = ElasticityTensor::identity(n).scale(self.epsilon);
        let sum = ElasticityTensor::from_fn(n, |i, j, k, l| {
            self.terms
                .iter()
                .map(|t| half * t.alpha * (t.u[(i, k)] * t.u[(j, l)] + t.u[(j, k)] * t.u[(i, l)]))
                .sum()
        })
        .expect("certificate terms are finite");
        base.sub(&sum.scale(-T::one()))
    }

    /// Largest entrywise deviation between `a` and the reconstruction.
    pub fn reconstruction_error(&self, a: &ElasticityTensor<T>) -> T {
        self.reconstruct(a.n()).sub(a).max_abs()
    }

    /// Export JSON: `{ epsilon, terms: [{ alpha, U }], reconstruction_error }`.
    pub fn to_json(&self, a: &ElasticityTensor<T>) -> String {
        #[derive(Serialize)]
        struct Export<'a, T: Scalar> {
            epsilon: f64,
            terms: Vec<ExportTerm<'a, T>>,
            reconstruction_error: f64,
        }
        #[derive(Serialize)]
        struct ExportTerm<'a, T: Scalar> {
            alpha: f64,
            #[serde(rename = "U")]
            u: &'a Matrix<T>,
        }
        let export = Export {
            epsilon: self.epsilon.as_f64(),
            terms: self.terms.iter().map(|t| ExportTerm { alpha: t.alpha.as_f64(), u: &t.u }).collect(),
            reconstruction_error: self.reconstruction_error(a).as_f64(),
        };
        serde_json::to_string_pretty(&export).expect("certificate serializes")
    }
}

/// Reads a certificate off a tensor with PSD unfolding.
///
/// Each eigenpair `(α, v)` of the x-unfolding with `α > 1e-9 · α_max`
/// becomes `U[i, k] = v[k·n + i]`, rescaled so `max|U| = 1` with its first
/// nonzero entry positive.
pub fn extract_certificate<T: Scalar>(astar: &GeneralTensor4<T>, epsilon: T) -> Result<PsdCertificate<T>> {
    let n = astar.n();
    let unfolded = astar.unfold(UnfoldMode::X).matrix;
    let eig = SymmetricEigen::new(&unfolded);
    let top = eig.max();
    if eig.min() < -T::lit(1e-10) * T::one().max(top.abs()) {
        return Err(Error::NotPsd(eig.min().as_f64()));
    }
    let rank_tol = T::lit(1e-9) * top;
    let mut terms = Vec::new();
    for s in (0..n * n).rev() {
        let d = eig.values[s];
        if !(d > rank_tol) || d <= T::zero() {
            continue;
        }
        let v = eig.vectors.column(s);
        let mut u = Matrix::from_fn(n, n, |i, k| v[k * n + i]);
        let scale = u.max_abs();
        let first = u.as_slice().iter().copied().find(|c| c.abs() > T::lit(1e-12) * scale).unwrap_or_else(T::one);
        let sign = if first < T::zero() { -T::one() } else { T::one() };
        u = u.map(|c| sign * c / scale);
        terms.push(CertificateTerm { alpha: d * scale * scale, u });
    }
    Ok(PsdCertificate { epsilon, terms })
}
