//! Orthogonal polynomial bases on `[-1, 1]` described by their three-term
//! recurrence
//!
//! ```text
//! t φ_i = α_i φ_{i+1} + β_i φ_i + γ_i φ_{i-1},   φ_0 = 1,  φ_1 = (t - β_0) / α_0
//! ```
//!
//! together with the squared weighted norms `μ_i = ‖φ_i‖²_w`. Coefficient
//! vectors act as row vectors: `t·y` has coefficients `y μ_φ` and `y'` has
//! coefficients `y η_φ`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Relative threshold below which trailing coefficients are treated as zero
/// when a polynomial degree must be well defined (root-finding).
pub const TRIM_THRESHOLD: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Chebyshev,
    Legendre,
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chebyshev" => Ok(BasisKind::Chebyshev),
            "legendre" => Ok(BasisKind::Legendre),
            _ => Err(Error::UnknownBasis(s.to_string())),
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Chebyshev => f.write_str("chebyshev"),
            BasisKind::Legendre => f.write_str("legendre"),
        }
    }
}

/// Recurrence data of a Chebyshev or Legendre family, normalized with
/// `φ_i(1) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrthoBasis {
    kind: BasisKind,
}

/// Parses a basis name (`"chebyshev"` or `"legendre"`, case-insensitive).
pub fn make_basis(kind: &str) -> Result<OrthoBasis> {
    kind.parse().map(OrthoBasis::new)
}

impl OrthoBasis {
    pub const fn new(kind: BasisKind) -> Self {
        Self { kind }
    }

    pub const fn chebyshev() -> Self {
        Self::new(BasisKind::Chebyshev)
    }

    pub const fn legendre() -> Self {
        Self::new(BasisKind::Legendre)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn alpha(&self, i: usize) -> f64 {
        match self.kind {
            BasisKind::Chebyshev if i == 0 => 1.0,
            BasisKind::Chebyshev => 0.5,
            BasisKind::Legendre => (i as f64 + 1.0) / (2.0 * i as f64 + 1.0),
        }
    }

    pub fn beta(&self, _i: usize) -> f64 {
        0.0
    }

    /// `γ_0` never enters the recurrence; it is reported as zero.
    pub fn gamma(&self, i: usize) -> f64 {
        match self.kind {
            _ if i == 0 => 0.0,
            BasisKind::Chebyshev => 0.5,
            BasisKind::Legendre => i as f64 / (2.0 * i as f64 + 1.0),
        }
    }

    pub fn mu(&self, i: usize) -> f64 {
        match self.kind {
            BasisKind::Chebyshev if i == 0 => PI,
            BasisKind::Chebyshev => PI / 2.0,
            BasisKind::Legendre => 2.0 / (2.0 * i as f64 + 1.0),
        }
    }

    /// Values `φ_0(t), …, φ_n(t)` by forward recurrence.
    pub fn values(&self, n: usize, t: f64) -> Vec<f64> {
        let mut v = Vec::with_capacity(n + 1);
        v.push(1.0);
        if n >= 1 {
            v.push((t - self.beta(0)) / self.alpha(0));
        }
        for i in 1..n {
            let next = ((t - self.beta(i)) * v[i] - self.gamma(i) * v[i - 1]) / self.alpha(i);
            v.push(next);
        }
        v
    }

    /// Strictly lower triangular `(n+1)×(n+1)` matrix `η` with
    /// `φ_i' = Σ_j η_{i,j} φ_j`, built from the differentiated recurrence.
    ///
    /// The matrix is exact for every size: derivatives only lower the degree.
    pub fn derivative_matrix(&self, n: usize) -> DMatrix<f64> {
        let mut eta = DMatrix::zeros(n + 1, n + 1);
        if n >= 1 {
            eta[(1, 0)] = 1.0 / self.alpha(0);
        }
        for i in 1..n {
            let ai = self.alpha(i);
            let bi = self.beta(i);
            let gi = self.gamma(i);
            for j in 0..i {
                let left = if j >= 1 {
                    self.alpha(j - 1) * eta[(i, j - 1)]
                } else {
                    0.0
                };
                let right = if j + 1 < i {
                    self.gamma(j + 1) * eta[(i, j + 1)]
                } else {
                    0.0
                };
                let centre = (self.beta(j) - bi) * eta[(i, j)];
                eta[(i + 1, j)] = (left + centre + right - gi * eta[(i - 1, j)]) / ai;
            }
            eta[(i + 1, i)] = (self.alpha(i - 1) * eta[(i, i - 1)] + 1.0) / ai;
        }
        eta
    }

    /// Tridiagonal `(n+1)×(n+1)` matrix `μ_φ` representing multiplication by
    /// `t`. Row `n` loses its `α_n` coupling into index `n+1`, so products
    /// are exact only for series of degree below `n`.
    pub fn shift_matrix(&self, n: usize) -> DMatrix<f64> {
        let mut mu = DMatrix::zeros(n + 1, n + 1);
        for i in 0..=n {
            if i >= 1 {
                mu[(i, i - 1)] = self.gamma(i);
            }
            mu[(i, i)] = self.beta(i);
            if i < n {
                mu[(i, i + 1)] = self.alpha(i);
            }
        }
        mu
    }
}

/// Finite expansion `Σ c_i φ_i` in a fixed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffSeries {
    basis: OrthoBasis,
    coeffs: Vec<f64>,
}

/// Value of a series together with an extrapolation flag (`t` outside
/// `[-1, 1]`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub extrapolated: bool,
}

impl CoeffSeries {
    pub fn new(basis: OrthoBasis, coeffs: Vec<f64>) -> Self {
        Self { basis, coeffs }
    }

    pub fn zeros(basis: OrthoBasis, len: usize) -> Self {
        Self::new(basis, vec![0.0; len])
    }

    /// Unit series `φ_i`.
    pub fn unit(basis: OrthoBasis, i: usize) -> Self {
        let mut c = vec![0.0; i + 1];
        c[i] = 1.0;
        Self::new(basis, c)
    }

    pub fn basis(&self) -> OrthoBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nominal degree (index of the last stored coefficient).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Degree after dropping trailing coefficients with
    /// `|c_i| <= TRIM_THRESHOLD * max |c_j|`. `None` for the zero series.
    pub fn numeric_degree(&self) -> Option<usize> {
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        self.coeffs
            .iter()
            .rposition(|c| c.abs() > TRIM_THRESHOLD * scale)
    }

    /// Clenshaw evaluation of `Σ c_i φ_i(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if self.coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        let b = &self.basis;
        let (mut b1, mut b2) = (0.0, 0.0);
        for k in (0..self.coeffs.len()).rev() {
            // b_k = c_k + A_k b_{k+1} + B_{k+1} b_{k+2}
            let a_k = (t - b.beta(k)) / b.alpha(k);
            let b_next = -b.gamma(k + 1) / b.alpha(k + 1);
            let bk = self.coeffs[k] + a_k * b1 + b_next * b2;
            b2 = b1;
            b1 = bk;
        }
        Ok(b1)
    }

    pub fn eval_checked(&self, t: f64) -> Result<Evaluation> {
        Ok(Evaluation {
            value: self.eval(t)?,
            extrapolated: !(-1.0..=1.0).contains(&t),
        })
    }

    /// Exact derivative (length shrinks by one, minimum one coefficient).
    pub fn derivative(&self) -> CoeffSeries {
        let n = self.degree();
        if n == 0 {
            return CoeffSeries::zeros(self.basis, 1);
        }
        let eta = self.basis.derivative_matrix(n);
        let out = (0..n)
            .map(|j| (j + 1..=n).map(|i| self.coeffs[i] * eta[(i, j)]).sum())
            .collect();
        CoeffSeries::new(self.basis, out)
    }

    /// Exact product `t·y` (length grows by one).
    pub fn mul_t(&self) -> CoeffSeries {
        let b = &self.basis;
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 1] += b.alpha(i) * c;
            out[i] += b.beta(i) * c;
            if i >= 1 {
                out[i - 1] += b.gamma(i) * c;
            }
        }
        CoeffSeries::new(self.basis, out)
    }

    pub fn scaled(&self, rho: f64) -> CoeffSeries {
        CoeffSeries::new(self.basis, self.coeffs.iter().map(|c| rho * c).collect())
    }

    /// `√(Σ μ_i c_i²)`, the weighted L² norm by Parseval.
    pub fn weighted_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| self.basis.mu(i) * c * c)
            .sum::<f64>()
            .sqrt()
    }

    /// All complex roots, as eigenvalues of the comrade matrix of the
    /// trimmed polynomial.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let d = match self.numeric_degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::ConstantPolynomial),
        };
        linalg::eigenvalues(self.comrade_matrix(d)).ok_or(Error::RootFinding(d))
    }

    /// Comrade matrix `C` of `Σ_{i≤d} c_i φ_i` acting on `[φ_0, …, φ_{d-1}]`.
    fn comrade_matrix(&self, d: usize) -> DMatrix<f64> {
        let b = &self.basis;
        let mut m = b.shift_matrix(d - 1);
        let lead = self.coeffs[d];
        let coupling = b.alpha(d - 1);
        for j in 0..d {
            m[(d - 1, j)] -= coupling * self.coeffs[j] / lead;
        }
        m
    }
}
