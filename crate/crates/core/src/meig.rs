//! M-eigenpairs `(λ, x, y)` of elasticity tensors:
//!
//! ```text
//! A x y² = λ x,   A x² y = λ y,   xᵀx = yᵀy = 1
//! ```
//!
//! Extremal M-eigenvalues come from a shifted alternating power iteration
//! with restarts. Small dimensions (n ≤ 3) can additionally be enumerated by
//! seeding a Gauss–Newton solve of the KKT system from a dense sphere grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{canonical_sign, complement_basis, dot, is_irreducible_pattern, norm2, normalized, solve, Matrix, SymmetricEigen};
use crate::scalar::Scalar;
use crate::tensor::{ElasticityTensor, FourthOrder};

/// Components below this magnitude are skipped when fixing eigenvector signs.
const SIGN_TINY: f64 = 1e-12;

/// One M-eigenvalue with a pair of unit M-eigenvectors. Signs are
/// canonical: the first non-negligible component of `x` and of `y` is
/// positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MEigenpair<T> {
    pub lambda: T,
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> MEigenpair<T> {
    /// `(‖A x y² − λx‖₂, ‖A x² y − λy‖₂)`.
    pub fn residuals(&self, a: &ElasticityTensor<T>) -> (T, T) {
        kkt_residuals(a, &self.x, &self.y, self.lambda)
    }

    pub fn residual(&self, a: &ElasticityTensor<T>) -> T {
        let (rx, ry) = self.residuals(a);
        rx.max(ry)
    }

    /// Normalizes and sign-canonicalizes `(x, y)`, then checks the residual
    /// invariant `max residual ≤ tol · max(1, |λ|)`.
    pub fn checked(a: &ElasticityTensor<T>, lambda: T, x: &[T], y: &[T], tol: f64) -> Result<Self> {
        let (mut x, mut y) = match (normalized(x), normalized(y)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::NoConvergence { iterations: 0, residual: f64::INFINITY }),
        };
        canonical_sign(&mut x, T::lit(SIGN_TINY));
        canonical_sign(&mut y, T::lit(SIGN_TINY));
        let pair = Self { lambda, x, y };
        let res = pair.residual(a);
        if !(res <= T::lit(tol) * T::one().max(lambda.abs())) {
            return Err(Error::NoConvergence { iterations: 0, residual: res.as_f64() });
        }
        Ok(pair)
    }

    /// Same eigenvalue within `tol` (relative to `max(1, |λ|)`) and
    /// eigenvectors aligned up to sign: `|⟨x, x'⟩|, |⟨y, y'⟩| > 1 − tol`.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        let t = T::lit(tol);
        (self.lambda - other.lambda).abs() <= t * T::one().max(self.lambda.abs())
            && self.alignment(other) > T::one() - t
    }

    /// `min(|⟨x, x'⟩|, |⟨y, y'⟩|)`.
    pub fn alignment(&self, other: &Self) -> T {
        dot(&self.x, &other.x).abs().min(dot(&self.y, &other.y).abs())
    }
}

fn kkt_residuals<T: Scalar>(a: &ElasticityTensor<T>, x: &[T], y: &[T], lambda: T) -> (T, T) {
    let ayy = a.partial_yy_unchecked(y).matvec(x);
    let axx = a.partial_xx_unchecked(x).matvec(y);
    let rx: Vec<T> = ayy.iter().zip(x).map(|(&g, &v)| g - lambda * v).collect();
    let ry: Vec<T> = axx.iter().zip(y).map(|(&g, &v)| g - lambda * v).collect();
    (norm2(&rx), norm2(&ry))
}

fn biquadratic<T: Scalar>(a: &ElasticityTensor<T>, x: &[T], y: &[T]) -> T {
    a.partial_xx_unchecked(x).quad_form(y)
}

fn cmp_lex<T: Scalar>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    for (u, v) in a.iter().zip(b) {
        match u.partial_cmp(v) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerOptions {
    /// Shift τ applied as `A + τE`; defaults to `1 + Σ|a_ijkl|`.
    pub shift: Option<f64>,
    pub max_iter: usize,
    /// Convergence tolerance on the eigenvalue change and the KKT residual,
    /// both relative to `max(1, |λ̃|)` of the shifted tensor.
    pub tol: f64,
    /// Number of random starts in addition to the all-ones and coordinate
    /// starts.
    pub restarts: usize,
    pub seed: u64,
    /// Residual bound (relative to `max(1, |λ|)`) every returned pair must
    /// satisfy.
    pub pair_tol: f64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { shift: None, max_iter: 10_000, tol: 1e-10, restarts: 16, seed: 42, pair_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerDiagnostics {
    pub shift: f64,
    pub starts: usize,
    pub converged_starts: usize,
    /// Iterations used by the start that produced the answer.
    pub iterations: usize,
    pub total_iterations: usize,
    pub residual: f64,
    /// Whether the shifted objective never decreased along the winning run.
    pub monotone: bool,
    /// Whether the winning run needed a Gauss–Newton polish to reach `tol`.
    pub polished: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerOutcome<T> {
    pub pair: MEigenpair<T>,
    pub diagnostics: PowerDiagnostics,
}

struct StartRun<T> {
    lambda: T,
    x: Vec<T>,
    y: Vec<T>,
    iterations: usize,
    residual: T,
    converged: bool,
    monotone: bool,
    polished: bool,
}

fn power_single<T: Scalar>(
    a: &ElasticityTensor<T>,
    tau: T,
    x0: &[T],
    y0: &[T],
    opts: &PowerOptions,
    nonneg: bool,
) -> Option<StartRun<T>> {
    let tol = T::lit(opts.tol);
    let mut x = normalized(x0)?;
    let mut y = normalized(y0)?;
    let mut lam = biquadratic(a, &x, &y) + tau;
    let mut monotone = true;
    let mut iterations = 0;
    let mut converged = false;
    let mut residual = T::infinity();

    while iterations < opts.max_iter {
        iterations += 1;
        let gx: Vec<T> = a.partial_yy_unchecked(&y).matvec(&x).iter().zip(&x).map(|(&g, &v)| g + tau * v).collect();
        x = normalized(&gx)?;
        let gy: Vec<T> = a.partial_xx_unchecked(&x).matvec(&y).iter().zip(&y).map(|(&g, &v)| g + tau * v).collect();
        y = normalized(&gy)?;
        let next = biquadratic(a, &x, &y) + tau;
        let scale = T::one().max(lam.abs());
        if next < lam - T::lit(1e-12) * scale {
            monotone = false;
        }
        let (rx, ry) = kkt_residuals(a, &x, &y, next - tau);
        residual = rx.max(ry);
        let done = (next - lam).abs() <= tol * scale && residual <= tol * T::one().max(next.abs());
        lam = next;
        if done {
            converged = true;
            break;
        }
    }

    let mut polished = false;
    if !converged {
        let scale = T::one().max(lam.abs());
        if let Some(r) = refine(a, &x, &y, 50, tol * scale) {
            let inside = !nonneg || (r.x.iter().chain(&r.y).all(|&v| v >= T::lit(-1e-12)));
            if inside {
                x = r.x;
                y = r.y;
                lam = r.lambda + tau;
                residual = r.residual;
                converged = true;
                polished = true;
            }
        }
    }
    if converged && !polished {
        // a few Newton steps take the residual from ~tol down to round-off
        let scale = T::one().max(lam.abs());
        if let Some(r) = polish(a, &x, &y, 3) {
            let same = (r.lambda + tau - lam).abs() <= T::lit(1e-8) * scale;
            let inside = !nonneg || r.x.iter().chain(&r.y).all(|&v| v >= T::lit(-1e-12));
            if same && inside && r.residual < residual {
                x = r.x;
                y = r.y;
                lam = r.lambda + tau;
                residual = r.residual;
            }
        }
    }
    if nonneg {
        x.iter_mut().chain(y.iter_mut()).for_each(|v| *v = v.abs());
    }
    Some(StartRun { lambda: lam - tau, x, y, iterations, residual, converged, monotone, polished })
}

fn default_shift<T: Scalar>(a: &ElasticityTensor<T>) -> T {
    T::one() + a.sum_abs()
}

fn random_unit<T: Scalar>(rng: &mut ChaCha8Rng, n: usize, nonneg: bool) -> Vec<T> {
    loop {
        let v: Vec<T> = (0..n)
            .map(|_| {
                let s: f64 = rng.sample(StandardNormal);
                T::lit(if nonneg { s.abs() } else { s })
            })
            .collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

fn starts<T: Scalar>(n: usize, opts: &PowerOptions, nonneg: bool) -> Vec<(Vec<T>, Vec<T>)> {
    let ones = vec![T::one(); n];
    let mut out = vec![(ones.clone(), ones)];
    for i in 0..n {
        for k in 0..n {
            let mut x = vec![T::zero(); n];
            let mut y = vec![T::zero(); n];
            x[i] = T::one();
            y[k] = T::one();
            out.push((x, y));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let x = random_unit(&mut rng, n, nonneg);
        let y = random_unit(&mut rng, n, nonneg);
        out.push((x, y));
    }
    out
}

fn power_max_impl<T: Scalar>(a: &ElasticityTensor<T>, opts: &PowerOptions, nonneg: bool) -> Result<PowerOutcome<T>> {
    if opts.tol <= 0.0 || opts.pair_tol <= 0.0 {
        return Err(Error::InvalidOption("tolerances must be positive".into()));
    }
    let tau = opts.shift.map(T::lit).unwrap_or_else(|| default_shift(a));
    let n = a.n();
    let seeds = starts::<T>(n, opts, nonneg);
    let mut best: Option<StartRun<T>> = None;
    let mut converged_starts = 0;
    let mut total_iterations = 0;
    let mut worst_residual = T::zero();
    let tie = T::lit(1e-12) * T::one().max(tau);

    for (x0, y0) in &seeds {
        let Some(mut run) = power_single(a, tau, x0, y0, opts, nonneg) else { continue };
        total_iterations += run.iterations;
        if !run.converged {
            worst_residual = worst_residual.max(run.residual);
            continue;
        }
        converged_starts += 1;
        canonical_sign(&mut run.x, T::lit(SIGN_TINY));
        canonical_sign(&mut run.y, T::lit(SIGN_TINY));
        let better = match &best {
            None => true,
            Some(b) if run.lambda > b.lambda + tie => true,
            Some(b) if (run.lambda - b.lambda).abs() <= tie => {
                cmp_lex(&run.x, &b.x).then(cmp_lex(&run.y, &b.y)) == std::cmp::Ordering::Less
            }
            _ => false,
        };
        if better {
            best = Some(run);
        }
    }

    let Some(best) = best else {
        return Err(Error::NoConvergence { iterations: total_iterations, residual: worst_residual.as_f64() });
    };
    let pair = MEigenpair::checked(a, best.lambda, &best.x, &best.y, opts.pair_tol)?;
    let diagnostics = PowerDiagnostics {
        shift: tau.as_f64(),
        starts: seeds.len(),
        converged_starts,
        iterations: best.iterations,
        total_iterations,
        residual: pair.residual(a).as_f64(),
        monotone: best.monotone,
        polished: best.polished,
    };
    Ok(PowerOutcome { pair, diagnostics })
}

/// Largest M-eigenvalue by the shifted alternating power iteration
/// `x ← normalize(Ã x y²)`, `y ← normalize(Ã x² y)` on `Ã = A + τE`, with
/// the shift removed from the reported eigenvalue.
pub fn power_method_max<T: Scalar>(a: &ElasticityTensor<T>, opts: &PowerOptions) -> Result<PowerOutcome<T>> {
    power_max_impl(a, opts, false)
}

/// Smallest M-eigenvalue, computed as `−λ_max(−A)`.
pub fn power_method_min<T: Scalar>(a: &ElasticityTensor<T>, opts: &PowerOptions) -> Result<PowerOutcome<T>> {
    let neg = a.scale(-T::one());
    let mut out = power_max_impl(&neg, opts, false)?;
    // + 0 turns a negated zero into +0
    out.pair.lambda = -out.pair.lambda + T::zero();
    Ok(out)
}

/// Returns the first strictly negative entry (beyond `-1e-14`) if any.
pub fn first_negative_entry<T: Scalar>(b: &ElasticityTensor<T>) -> Option<([usize; 4], T)> {
    let n = b.n();
    let floor = T::lit(-1e-14);
    b.entries().iter().position(|&v| v < floor).map(|pos| {
        let idx = [pos / (n * n * n), (pos / (n * n)) % n, (pos / n) % n, pos % n];
        (idx, b.entries()[pos])
    })
}

/// M-spectral radius of a nonnegative tensor, i.e. its largest
/// M-eigenvalue, with a nonnegative eigenvector pair. Every iterate stays
/// in the nonnegative orthant.
pub fn spectral_radius_nonneg<T: Scalar>(b: &ElasticityTensor<T>, opts: &PowerOptions) -> Result<PowerOutcome<T>> {
    if let Some((index, value)) = first_negative_entry(b) {
        return Err(Error::NotNonnegative { index, value: value.as_f64() });
    }
    power_max_impl(b, opts, true)
}

/// Which slice matrix broke irreducibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReducibleSlice {
    /// `B(:, :, k, k)` (0-based `k`).
    X { k: usize },
    /// `B(i, i, :, :)` (0-based `i`).
    Y { i: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub witness: Option<ReducibleSlice>,
}

/// A nonnegative tensor is irreducible when every slice `B(:, :, k, k)` and
/// every slice `B(i, i, :, :)` is an irreducible matrix.
pub fn is_irreducible<T: Scalar>(b: &ElasticityTensor<T>) -> Result<Irreducibility> {
    if let Some((index, value)) = first_negative_entry(b) {
        return Err(Error::NotNonnegative { index, value: value.as_f64() });
    }
    let n = b.n();
    for k in 0..n {
        let slice = Matrix::from_fn(n, n, |i, j| b.get(i, j, k, k));
        if !is_irreducible_pattern(&slice) {
            return Ok(Irreducibility { irreducible: false, witness: Some(ReducibleSlice::X { k }) });
        }
    }
    for i in 0..n {
        let slice = Matrix::from_fn(n, n, |k, l| b.get(i, i, k, l));
        if !is_irreducible_pattern(&slice) {
            return Ok(Irreducibility { irreducible: false, witness: Some(ReducibleSlice::Y { i }) });
        }
    }
    Ok(Irreducibility { irreducible: true, witness: None })
}

pub(crate) struct Refined<T> {
    pub lambda: T,
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub residual: T,
    /// Smallest singular value of the KKT Jacobian restricted to the
    /// tangent space of the sphere product. Zero on eigen-manifolds.
    pub sigma_min: T,
}

/// Jacobian of `F(x, y) = (A x y² − λx, A x² y − λy)` with `λ = A x² y²`,
/// as a 2n × 2n matrix.
pub(crate) fn kkt_jacobian<T: Scalar>(a: &ElasticityTensor<T>, x: &[T], y: &[T]) -> Matrix<T> {
    let n = a.n();
    let ayy = a.partial_yy_unchecked(y);
    let axx = a.partial_xx_unchecked(x);
    let gx = ayy.matvec(x);
    let gy = axx.matvec(y);
    let lambda = dot(&gx, x);
    let c = a.mixed(x, y);
    let two = T::lit(2.0);
    Matrix::from_fn(2 * n, 2 * n, |r, col| {
        let delta = if r % n == col % n { lambda } else { T::zero() };
        match (r < n, col < n) {
            (true, true) => ayy[(r, col)] - if r == col { delta } else { T::zero() } - two * x[r] * gx[col],
            (true, false) => two * c[(r, col - n)] - two * x[r] * gy[col - n],
            (false, true) => two * c[(col, r - n)] - two * y[r - n] * gx[col],
            (false, false) => {
                axx[(r - n, col - n)] - if r == col { delta } else { T::zero() } - two * y[r - n] * gy[col - n]
            }
        }
    })
}

fn tangent_system<T: Scalar>(a: &ElasticityTensor<T>, x: &[T], y: &[T]) -> (Matrix<T>, Matrix<T>, Matrix<T>) {
    let n = a.n();
    let j = kkt_jacobian(a, x, y);
    let tx = complement_basis(x);
    let ty = complement_basis(y);
    let m = n - 1;
    let jt = Matrix::from_fn(2 * n, 2 * m, |r, c| {
        if c < m {
            (0..n).map(|k| j[(r, k)] * tx[(k, c)]).sum()
        } else {
            (0..n).map(|k| j[(r, n + k)] * ty[(k, c - m)]).sum()
        }
    });
    (jt, tx, ty)
}

fn sigma_min<T: Scalar>(jt: &Matrix<T>) -> T {
    let normal = jt.transpose().matmul(jt);
    SymmetricEigen::new(&normal).min().max(T::zero()).sqrt()
}

/// Gauss–Newton on the KKT system in the tangent space of the sphere
/// product, retracting by normalization after every step. `None` unless the
/// residual reaches `tol` within `max_iter` steps.
pub(crate) fn refine<T: Scalar>(a: &ElasticityTensor<T>, x0: &[T], y0: &[T], max_iter: usize, tol: T) -> Option<Refined<T>> {
    newton(a, x0, y0, max_iter, tol).and_then(|(r, converged)| converged.then_some(r))
}

/// Up to `steps` Gauss–Newton steps; returns the iterate with the smallest
/// residual seen.
pub(crate) fn polish<T: Scalar>(a: &ElasticityTensor<T>, x0: &[T], y0: &[T], steps: usize) -> Option<Refined<T>> {
    newton(a, x0, y0, steps, T::zero()).map(|(r, _)| r)
}

fn newton<T: Scalar>(a: &ElasticityTensor<T>, x0: &[T], y0: &[T], max_iter: usize, tol: T) -> Option<(Refined<T>, bool)> {
    let n = a.n();
    let m = n - 1;
    let mut x = normalized(x0)?;
    let mut y = normalized(y0)?;
    let mut best: Option<Refined<T>> = None;
    for it in 0..=max_iter {
        let lambda = biquadratic(a, &x, &y);
        let fx: Vec<T> = a.partial_yy_unchecked(&y).matvec(&x).iter().zip(&x).map(|(&g, &v)| g - lambda * v).collect();
        let fy: Vec<T> = a.partial_xx_unchecked(&x).matvec(&y).iter().zip(&y).map(|(&g, &v)| g - lambda * v).collect();
        let f: Vec<T> = fx.iter().chain(&fy).copied().collect();
        let residual = norm2(&fx).max(norm2(&fy));
        let (jt, tx, ty) = tangent_system(a, &x, &y);
        if residual <= tol {
            return Some((Refined { lambda, x, y, residual, sigma_min: sigma_min(&jt) }, true));
        }
        if best.as_ref().is_none_or(|b| residual < b.residual) {
            best = Some(Refined { lambda, x: x.clone(), y: y.clone(), residual, sigma_min: T::nan() });
        }
        if it == max_iter {
            break;
        }
        let jtt = jt.transpose();
        let mut normal = jtt.matmul(&jt);
        let rhs: Vec<T> = jtt.matvec(&f).iter().map(|&v| -v).collect();
        let damping = T::lit(1e-12) * (0..2 * m).fold(T::zero(), |acc, i| acc.max(normal[(i, i)])) + T::min_positive_value();
        for i in 0..2 * m {
            normal[(i, i)] += damping;
        }
        let Some(mut step) = solve(&normal, &rhs) else { break };
        let len = norm2(&step);
        let cap = T::lit(0.5);
        if len > cap {
            step.iter_mut().for_each(|s| *s = *s * cap / len);
        }
        let dx = tx.matvec(&step[..m]);
        let dy = ty.matvec(&step[m..]);
        let nx: Vec<T> = x.iter().zip(&dx).map(|(&a, &b)| a + b).collect();
        let ny: Vec<T> = y.iter().zip(&dy).map(|(&a, &b)| a + b).collect();
        match (normalized(&nx), normalized(&ny)) {
            (Some(u), Some(v)) => {
                x = u;
                y = v;
            }
            _ => break,
        }
    }
    best.map(|b| (b, false))
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerateOptions {
    /// Points per sphere. Defaults to 360 angles on [0, π) for n = 2 and a
    /// 2000-point Fibonacci grid for n = 3.
    pub grid_density: Option<usize>,
    /// Gauss–Newton stopping tolerance on the KKT residual, relative to
    /// `max(1, max|a_ijkl|)`.
    pub refine_tol: f64,
    pub dedup_tol: f64,
    pub max_newton: usize,
    /// Tangent-space Jacobian singular value (relative to
    /// `max(1, max|a_ijkl|)`) below which a pair is treated as lying on a
    /// continuum of eigenpairs.
    pub degenerate_tol: f64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self { grid_density: None, refine_tol: 1e-11, dedup_tol: 1e-6, max_newton: 60, degenerate_tol: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry<T> {
    pub pair: MEigenpair<T>,
    /// The pair sits on a continuum of eigenpairs sharing this eigenvalue;
    /// the entry is one representative of that manifold.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerateDiagnostics {
    pub grid_density: usize,
    pub seeds: usize,
    pub converged: usize,
    /// Seeds whose refinement failed to converge; they are skipped.
    pub diverged: usize,
}

/// Deduplicated M-eigenpairs sorted by decreasing eigenvalue.
#[derive(Debug, Clone, Serialize)]
pub struct MSpectrum<T> {
    pub entries: Vec<SpectrumEntry<T>>,
    /// Set by the grid enumerator. Completeness rests on grid density and is
    /// heuristic, not proven.
    pub complete: bool,
    pub diagnostics: EnumerateDiagnostics,
}

impl<T: Scalar> MSpectrum<T> {
    pub fn pairs(&self) -> impl Iterator<Item = &MEigenpair<T>> {
        self.entries.iter().map(|e| &e.pair)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.pairs().map(|p| p.lambda).collect()
    }

    /// Eigenvalues with pairs closer than `tol` merged, descending.
    pub fn distinct_eigenvalues(&self, tol: f64) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for lam in self.eigenvalues() {
            if out.last().is_none_or(|&prev| (prev - lam).abs() > T::lit(tol) * T::one().max(lam.abs())) {
                out.push(lam);
            }
        }
        out
    }

    pub fn max(&self) -> Option<T> {
        self.entries.first().map(|e| e.pair.lambda)
    }

    pub fn min(&self) -> Option<T> {
        self.entries.last().map(|e| e.pair.lambda)
    }

    /// Largest `|λ|` over the spectrum.
    pub fn spectral_radius(&self) -> Option<T> {
        self.pairs().map(|p| p.lambda.abs()).reduce(T::max)
    }
}

fn sphere_grid<T: Scalar>(n: usize, density: usize) -> Vec<Vec<T>> {
    match n {
        2 => (0..density)
            .map(|i| {
                let theta = std::f64::consts::PI * i as f64 / density as f64;
                vec![T::lit(theta.cos()), T::lit(theta.sin())]
            })
            .collect(),
        _ => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..density)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / density as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * i as f64;
                    vec![T::lit(r * phi.cos()), T::lit(r * phi.sin()), T::lit(z)]
                })
                .collect()
        }
    }
}

/// Enumerates the M-spectrum of a tensor with n ≤ 3.
///
/// Every M-eigenpair has `y` an eigenvector of `A x²` and `x` an
/// eigenvector of `A y²`. Seeds therefore pair each grid point on one
/// sphere with the eigenvectors of the corresponding partial matrix, for
/// both roles. Each seed is refined by Gauss–Newton and the results are
/// deduplicated.
pub fn enumerate_spectrum<T: Scalar>(a: &ElasticityTensor<T>, opts: &EnumerateOptions) -> Result<MSpectrum<T>> {
    let n = a.n();
    if n > 3 {
        return Err(Error::DimensionTooLarge { n, max: 3, what: "spectrum enumeration" });
    }
    let density = opts.grid_density.unwrap_or(if n == 2 { 360 } else { 2000 });
    if density == 0 {
        return Err(Error::InvalidOption("grid density must be positive".into()));
    }
    let scale = T::one().max(a.max_abs());
    let tol = T::lit(opts.refine_tol) * scale;
    let degenerate_below = T::lit(opts.degenerate_tol) * scale;

    let grid = sphere_grid::<T>(n, density);
    let mut seeds = Vec::with_capacity(4 * n * grid.len());
    for s in &grid {
        let ex = SymmetricEigen::new(&a.partial_xx_unchecked(s));
        let ey = SymmetricEigen::new(&a.partial_yy_unchecked(s));
        for c in 0..n {
            seeds.push((s.clone(), ex.vectors.column(c)));
            seeds.push((ey.vectors.column(c), s.clone()));
        }
    }

    let mut found: Vec<SpectrumEntry<T>> = Vec::new();
    let mut diverged = 0;
    for (x0, y0) in &seeds {
        match refine(a, x0, y0, opts.max_newton, tol) {
            Some(r) => {
                let mut x = r.x;
                let mut y = r.y;
                canonical_sign(&mut x, T::lit(SIGN_TINY));
                canonical_sign(&mut y, T::lit(SIGN_TINY));
                found.push(SpectrumEntry {
                    pair: MEigenpair { lambda: r.lambda, x, y },
                    degenerate: r.sigma_min <= degenerate_below,
                });
            }
            None => diverged += 1,
        }
    }
    let converged = found.len();

    found.sort_by(|p, q| {
        q.pair
            .lambda
            .partial_cmp(&p.pair.lambda)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| cmp_lex(&p.pair.x, &q.pair.x))
            .then_with(|| cmp_lex(&p.pair.y, &q.pair.y))
    });
    let dedup = T::lit(opts.dedup_tol);
    let mut kept: Vec<SpectrumEntry<T>> = Vec::new();
    for cand in found {
        let duplicate = kept.iter().rev().take_while(|k| {
            (k.pair.lambda - cand.pair.lambda).abs() <= T::lit(10.0) * dedup * T::one().max(cand.pair.lambda.abs())
        }).any(|k| {
            if k.degenerate && cand.degenerate {
                (k.pair.lambda - cand.pair.lambda).abs() <= dedup * T::one().max(cand.pair.lambda.abs())
            } else {
                k.pair.matches(&cand.pair, opts.dedup_tol)
            }
        });
        if !duplicate {
            kept.push(cand);
        }
    }

    Ok(MSpectrum {
        entries: kept,
        complete: true,
        diagnostics: EnumerateDiagnostics { grid_density: density, seeds: seeds.len(), converged, diverged },
    })
}
