//! Fourth-order tensors with the elasticity symmetries, their contractions
//! against vector pairs and the two n² × n² unfoldings.
//!
//! Storage is a dense row-major `n⁴` array indexed `(i, j, k, l)`, 0-based.
//! Every symmetry-related entry is stored explicitly.

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::Scalar;

/// Relative tolerance (w.r.t. the largest entry) for accepting raw input as
/// already symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[inline]
fn flat(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

fn unflat(n: usize, idx: usize) -> [usize; 4] {
    [idx / (n * n * n), (idx / (n * n)) % n, (idx / n) % n, idx % n]
}

/// The index orbit `{(i,j,k,l), (j,i,k,l), (i,j,l,k), (j,i,l,k)}` of the
/// elasticity symmetry group.
pub fn symmetry_orbit([i, j, k, l]: [usize; 4]) -> [[usize; 4]; 4] {
    [[i, j, k, l], [j, i, k, l], [i, j, l, k], [j, i, l, k]]
}

/// Read access shared by [`ElasticityTensor`] and [`GeneralTensor4`].
pub trait FourthOrder<T: Scalar> {
    fn dim(&self) -> usize;
    fn entries(&self) -> &[T];

    fn at(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.entries()[flat(self.dim(), i, j, k, l)]
    }

    /// Unfolds into an n² × n² matrix.
    ///
    /// The x-unfolding has block `(k, l)` equal to the slice `T(:, :, k, l)`,
    /// i.e. `Aₓ[k·n + i, l·n + j] = t_ijkl`. The y-unfolding has block
    /// `(i, j)` equal to `T(i, j, :, :)`, i.e. `A_y[i·n + k, j·n + l] = t_ijkl`.
    fn unfold(&self, mode: UnfoldMode) -> UnfoldedMatrix<T> {
        let n = self.dim();
        let mut m = Matrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.at(i, j, k, l);
                        match mode {
                            UnfoldMode::X => m[(k * n + i, l * n + j)] = v,
                            UnfoldMode::Y => m[(i * n + k, j * n + l)] = v,
                        }
                    }
                }
            }
        }
        UnfoldedMatrix { mode, matrix: m }
    }

    fn frobenius_norm(&self) -> T {
        self.entries().iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    fn max_abs(&self) -> T {
        self.entries().iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnfoldMode {
    X,
    Y,
}

/// An n² × n² unfolding tagged with the mode that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedMatrix<T> {
    pub mode: UnfoldMode,
    pub matrix: Matrix<T>,
}

/// Perfect-shuffle index map `σ(k·n + i) = i·n + k`. With `P[σ(p), p] = 1`
/// the unfoldings satisfy `Aₓ = Pᵀ A_y P`, i.e. `Aₓ[p, q] = A_y[σ(p), σ(q)]`.
pub fn shuffle_permutation(n: usize) -> Vec<usize> {
    (0..n * n).map(|p| (p % n) * n + p / n).collect()
}

/// Dense fourth-order tensor with `a_ijkl = a_jikl = a_ijlk`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticityTensor<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> FourthOrder<T> for ElasticityTensor<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T: Scalar> ElasticityTensor<T> {
    /// Validates (or, with `symmetrize`, orbit-averages) a raw `n⁴` array
    /// given in `(i, j, k, l)` row-major order.
    pub fn new(n: usize, raw: Vec<T>, symmetrize: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let expected = n.pow(4);
        if raw.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: raw.len() });
        }
        if let Some(pos) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry(unflat(n, pos)));
        }
        if symmetrize {
            return Ok(Self { n, data: orbit_average(n, &raw) });
        }
        let scale = raw.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tol = T::lit(SYMMETRY_TOL) * scale;
        let mut worst: Option<([usize; 4], T)> = None;
        for (pos, &v) in raw.iter().enumerate() {
            let [i, j, k, l] = unflat(n, pos);
            let dev = (v - raw[flat(n, j, i, k, l)]).abs().max((v - raw[flat(n, i, j, l, k)]).abs());
            if dev > tol && worst.is_none_or(|(_, w)| dev > w) {
                worst = Some(([i, j, k, l], dev));
            }
        }
        match worst {
            Some((index, dev)) => Err(Error::SymmetryViolation { index, deviation: dev.as_f64() }),
            // snaps deviations below the tolerance to exact symmetry
            None => Ok(Self { n, data: orbit_average(n, &raw) }),
        }
    }

    /// Builds a tensor from a generator, orbit-averaging the result.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> T) -> Result<Self> {
        let mut raw = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        raw.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self::new(n, raw, true)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 2, "dimension must be at least 2");
        Self { n, data: vec![T::zero(); n.pow(4)] }
    }

    /// The identity tensor: `e_iikk = 1`, all other entries zero.
    pub fn identity(n: usize) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                t.data[flat(n, i, i, k, k)] = T::one();
            }
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.data[flat(self.n, i, j, k, l)]
    }

    /// Sum of absolute values of all entries, an upper bound for
    /// `|A x² y²|` on unit vectors.
    pub fn sum_abs(&self) -> T {
        self.data.iter().map(|v| v.abs()).sum()
    }

    /// `α (A + β E)`.
    pub fn shift(&self, alpha: T, beta: T) -> Self {
        let n = self.n;
        let mut data: Vec<T> = self.data.iter().map(|&v| alpha * v).collect();
        for i in 0..n {
            for k in 0..n {
                data[flat(n, i, i, k, k)] += alpha * beta;
            }
        }
        Self { n, data }
    }

    pub fn scale(&self, alpha: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&v| alpha * v).collect() }
    }

    /// Entrywise `self - other`. Panics on dimension mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect() }
    }

    /// Diagonal entries `a_iikk` as an n × n matrix indexed `(i, k)`.
    pub fn diagonal(&self) -> Matrix<T> {
        Matrix::from_fn(self.n, self.n, |i, k| self.get(i, i, k, k))
    }

    pub fn is_diagonal_index([i, j, k, l]: [usize; 4]) -> bool {
        i == j && k == l
    }

    fn check_len(&self, v: &[T]) -> Result<()> {
        if v.len() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, got: v.len() })
        }
    }

    /// `A x² y² = Σ a_ijkl x_i x_j y_k y_l`.
    pub fn contract_xxyy(&self, x: &[T], y: &[T]) -> Result<T> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.partial_xx_unchecked(x).quad_form(y))
    }

    /// `(A x y²)_i = Σ a_ijkl x_j y_k y_l`.
    pub fn contract_xyy(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.partial_yy_unchecked(y).matvec(x))
    }

    /// `(A x² y)_l = Σ a_ijkl x_i x_j y_k`.
    pub fn contract_xxy(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.partial_xx_unchecked(x).matvec(y))
    }

    /// `(A x²)_kl = Σ a_ijkl x_i x_j`.
    pub fn partial_xx(&self, x: &[T]) -> Result<Matrix<T>> {
        self.check_len(x)?;
        Ok(self.partial_xx_unchecked(x))
    }

    /// `(A y²)_ij = Σ a_ijkl y_k y_l`.
    pub fn partial_yy(&self, y: &[T]) -> Result<Matrix<T>> {
        self.check_len(y)?;
        Ok(self.partial_yy_unchecked(y))
    }

    pub(crate) fn partial_xx_unchecked(&self, x: &[T]) -> Matrix<T> {
        let n = self.n;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let w = x[i] * x[j];
                if w == T::zero() {
                    continue;
                }
                let base = flat(n, i, j, 0, 0);
                for k in 0..n {
                    for l in 0..n {
                        m[(k, l)] += w * self.data[base + k * n + l];
                    }
                }
            }
        }
        m
    }

    pub(crate) fn partial_yy_unchecked(&self, y: &[T]) -> Matrix<T> {
        let n = self.n;
        Matrix::from_fn(n, n, |i, j| {
            let base = flat(n, i, j, 0, 0);
            let slice = &self.data[base..base + n * n];
            let mut acc = T::zero();
            for k in 0..n {
                acc += y[k] * dot(&slice[k * n..(k + 1) * n], y);
            }
            acc
        })
    }

    /// Mixed matrix `C_im = Σ_{j,l} a_ijml x_j y_l`, the y-derivative of
    /// `A x y²` up to a factor 2.
    pub(crate) fn mixed(&self, x: &[T], y: &[T]) -> Matrix<T> {
        let n = self.n;
        Matrix::from_fn(n, n, |i, m| {
            let mut acc = T::zero();
            for j in 0..n {
                for l in 0..n {
                    acc += self.get(i, j, m, l) * x[j] * y[l];
                }
            }
            acc
        })
    }

    pub fn to_general(&self) -> GeneralTensor4<T> {
        GeneralTensor4 { n: self.n, data: self.data.clone() }
    }

    /// Nested `[i][j][k][l]` arrays of `f64`, the dense file layout.
    pub fn to_nested_f64(&self) -> Vec<Vec<Vec<Vec<f64>>>> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| (0..n).map(|l| self.get(i, j, k, l).as_f64()).collect()).collect())
                    .collect()
            })
            .collect()
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> ElasticityTensor<U> {
        ElasticityTensor { n: self.n, data: self.data.iter().map(|v| U::lit(v.as_f64())).collect() }
    }
}

fn orbit_average<T: Scalar>(n: usize, raw: &[T]) -> Vec<T> {
    let quarter = T::lit(0.25);
    (0..raw.len())
        .map(|pos| {
            // summing in sorted order makes every orbit member bit-identical
            let mut orbit = symmetry_orbit(unflat(n, pos));
            orbit.sort_unstable();
            quarter * orbit.iter().map(|&[i, j, k, l]| raw[flat(n, i, j, k, l)]).sum::<T>()
        })
        .collect()
}

/// Fourth-order tensor carrying only the weak symmetry `t_ijkl = t_jilk`,
/// which makes its unfoldings symmetric matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralTensor4<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> FourthOrder<T> for GeneralTensor4<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T: Scalar> GeneralTensor4<T> {
    /// Validates the weak symmetry to [`SYMMETRY_TOL`] relative to the
    /// largest entry.
    pub fn new(n: usize, raw: Vec<T>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let expected = n.pow(4);
        if raw.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: raw.len() });
        }
        if let Some(pos) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry(unflat(n, pos)));
        }
        let t = Self { n, data: raw };
        let tol = T::lit(SYMMETRY_TOL) * t.max_abs();
        let (index, dev) = t.weak_asymmetry();
        if dev > tol {
            return Err(Error::SymmetryViolation { index, deviation: dev.as_f64() });
        }
        Ok(t)
    }

    /// Builds a tensor without checking any symmetry. Used for POCS
    /// perturbations and test inputs.
    pub fn from_raw(n: usize, raw: Vec<T>) -> Self {
        assert_eq!(raw.len(), n.pow(4), "raw length must be n^4");
        Self { n, data: raw }
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n.pow(4)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.data[flat(self.n, i, j, k, l)]
    }

    /// Largest `|t_ijkl - t_jilk|` and where it occurs.
    pub fn weak_asymmetry(&self) -> ([usize; 4], T) {
        let n = self.n;
        let mut worst = ([0; 4], T::zero());
        for (pos, &v) in self.data.iter().enumerate() {
            let [i, j, k, l] = unflat(n, pos);
            let dev = (v - self.data[flat(n, j, i, l, k)]).abs();
            if dev > worst.1 {
                worst = ([i, j, k, l], dev);
            }
        }
        worst
    }

    /// Folds an x-unfolding back into a tensor (inverse of
    /// `unfold(UnfoldMode::X)`).
    pub fn fold_x(n: usize, m: &Matrix<T>) -> Self {
        assert_eq!(m.rows(), n * n);
        let mut data = vec![T::zero(); n.pow(4)];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        data[flat(n, i, j, k, l)] = m[(k * n + i, l * n + j)];
                    }
                }
            }
        }
        Self { n, data }
    }

    /// Symmetric part `½(t_ijkl + t_jikl)`, the elasticity tensor this
    /// tensor represents through its biquadratic form.
    pub fn symmetric_part(&self) -> ElasticityTensor<T> {
        let n = self.n;
        let half = T::lit(0.5);
        let mut data = vec![T::zero(); n.pow(4)];
        for (pos, slot) in data.iter_mut().enumerate() {
            let [i, j, k, l] = unflat(n, pos);
            *slot = half * (self.data[pos] + self.data[flat(n, j, i, k, l)]);
        }
        // weak symmetry makes this elasticity-symmetric up to round-off
        ElasticityTensor { n, data: orbit_average(n, &data) }
    }

    /// `A x² y²` for a weakly symmetric tensor.
    pub fn contract_xxyy(&self, x: &[T], y: &[T]) -> T {
        let n = self.n;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        acc += self.get(i, j, k, l) * x[i] * x[j] * y[k] * y[l];
                    }
                }
            }
        }
        acc
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect() }
    }

    pub(crate) fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }
}

impl<T: Scalar> From<&ElasticityTensor<T>> for GeneralTensor4<T> {
    fn from(a: &ElasticityTensor<T>) -> Self {
        a.to_general()
    }
}
