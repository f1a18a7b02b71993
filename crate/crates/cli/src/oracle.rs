//! Closed-form solutions of the two built-in examples.
//!
//! Example 1: `(t+1) y' - y/2 = 0`, `y(0) = π√2/4`, Chebyshev basis, with
//! solution `y = π√(2(t+1))/4`.
//!
//! Example 2: `(1+α²-2αt)² y'' - 15α² y = 0` with Dirichlet data at `±1`,
//! Legendre basis, with solution `y = (1-α²)/(1+α²-2αt)^{3/2}` whose
//! Legendre coefficients are `(2k+1)αᵏ`.

use std::f64::consts::PI;

use taupade::{BasisKind, Condition, OrthoBasis};
use thiserror::Error;

use crate::problem::{FilterSpec, ProblemSpec};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("alpha must satisfy 0 < |alpha| < 1, got {0}")]
    AlphaOutOfRange(f64),
    #[error("example 1 needs n >= 2, got {0}")]
    DegreeTooSmall(usize),
}

/// `y(0)` for Example 1.
pub fn example1_y0() -> f64 {
    PI * 2f64.sqrt() / 4.0
}

/// Chebyshev coefficient `c_k` of the Example 1 solution.
pub fn example1_coeff(k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let kf = k as f64;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * 2.0 / (4.0 * kf * kf - 1.0)
}

/// `T_k(0)`.
fn cheb_at_zero(k: usize) -> f64 {
    match k % 4 {
        0 => 1.0,
        2 => -1.0,
        _ => 0.0,
    }
}

/// Squared weighted norm of the exact Example 1 series beyond degree `n`.
fn example1_tail_sq(n: usize) -> f64 {
    // terms decay like 1/(4k⁴); summing smallest first, then the remainder
    const LAST: usize = 200_000;
    let mut acc = 1.0 / (12.0 * (LAST as f64).powi(3));
    for k in (n + 1..=LAST).rev() {
        let c = example1_coeff(k);
        acc += c * c;
    }
    acc * PI / 2.0
}

#[derive(Clone, Debug)]
pub struct Example1Oracle {
    pub n: usize,
    /// `c_0, …, c_n`.
    pub exact_coeffs: Vec<f64>,
    pub s_n: f64,
    /// `c_0^{(n)}, …, c_n^{(n)}`.
    pub tau_coeffs: Vec<f64>,
    /// `c_k - c_k^{(n)}`.
    pub delta_coeffs: Vec<f64>,
    /// Amplitude of the single residual term `τ_n` on `T_n`.
    pub residual_amplitude: f64,
}

impl Example1Oracle {
    pub fn y(t: f64) -> f64 {
        PI * (2.0 * (t + 1.0)).sqrt() / 4.0
    }

    /// `‖y - y_n‖_w` from the exact coefficient errors and the tail.
    pub fn error_norm(&self) -> f64 {
        let head: f64 = self
            .delta_coeffs
            .iter()
            .enumerate()
            .map(|(k, d)| OrthoBasis::chebyshev().mu(k) * d * d)
            .sum();
        (head + example1_tail_sq(self.n)).sqrt()
    }
}

pub fn example1_oracle(n: usize) -> Result<Example1Oracle, OracleError> {
    if n < 2 {
        return Err(OracleError::DegreeTooSmall(n));
    }
    let y0 = example1_y0();
    let exact_coeffs: Vec<f64> = (0..=n).map(example1_coeff).collect();
    let last_weight = (2 * n + 1) as f64 / (4 * n) as f64;
    let s_n = (0..n).map(|k| exact_coeffs[k] * cheb_at_zero(k)).sum::<f64>()
        + last_weight * exact_coeffs[n] * cheb_at_zero(n);
    let tau_coeffs: Vec<f64> = exact_coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let w = if k == n { last_weight } else { 1.0 };
            w * y0 / s_n * c
        })
        .collect();
    let delta_coeffs = exact_coeffs.iter().zip(&tau_coeffs).map(|(c, t)| c - t).collect();
    let residual_amplitude = (n as f64 - 0.5) * tau_coeffs[n];
    Ok(Example1Oracle {
        n,
        exact_coeffs,
        s_n,
        tau_coeffs,
        delta_coeffs,
        residual_amplitude,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Example2Oracle {
    pub alpha: f64,
}

impl Example2Oracle {
    /// Legendre coefficient `(2k+1)αᵏ`.
    pub fn coeff(&self, k: usize) -> f64 {
        (2 * k + 1) as f64 * self.alpha.powi(k as i32)
    }

    pub fn coeffs(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|k| self.coeff(k)).collect()
    }

    /// Real singularity `(α + 1/α)/2`, outside `[-1, 1]`.
    pub fn singularity(&self) -> f64 {
        (self.alpha + 1.0 / self.alpha) / 2.0
    }

    pub fn y(&self, t: f64) -> f64 {
        let a = self.alpha;
        (1.0 - a * a) / (1.0 + a * a - 2.0 * a * t).powf(1.5)
    }

    pub fn y_minus_one(&self) -> f64 {
        let a = self.alpha;
        (1.0 - a) / ((1.0 + a) * (1.0 + a))
    }

    pub fn y_plus_one(&self) -> f64 {
        let a = self.alpha;
        (1.0 + a) / ((1.0 - a) * (1.0 - a))
    }

    /// Squared weighted norm of the exact series beyond degree `n`.
    pub fn tail_sq(&self, n: usize) -> f64 {
        let mut acc = 0.0;
        let mut k = n + 1;
        loop {
            let c = self.coeff(k);
            let term = OrthoBasis::legendre().mu(k) * c * c;
            acc += term;
            if term <= acc * 1e-18 || term == 0.0 {
                return acc;
            }
            k += 1;
        }
    }

    /// `‖y - y_n‖_w` for Legendre coefficients `c_0^{(n)}, …, c_n^{(n)}`.
    pub fn error_norm(&self, tau: &[f64]) -> f64 {
        let n = tau.len() - 1;
        let head: f64 = tau
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let d = self.coeff(k) - t;
                OrthoBasis::legendre().mu(k) * d * d
            })
            .sum();
        (head + self.tail_sq(n)).sqrt()
    }
}

pub fn example2_oracle(alpha: f64) -> Result<Example2Oracle, OracleError> {
    if !(alpha != 0.0 && alpha.abs() < 1.0) {
        return Err(OracleError::AlphaOutOfRange(alpha));
    }
    Ok(Example2Oracle { alpha })
}

fn example1_filter() -> FilterSpec {
    FilterSpec {
        pmax: 25,
        qmax: 25,
        tol: taupade::DEFAULT_TOL,
        strategy: Default::default(),
    }
}

pub fn example1_problem(n: usize) -> ProblemSpec {
    ProblemSpec {
        basis: BasisKind::Chebyshev,
        n,
        nu: 1,
        p: vec![vec![-0.5], vec![1.0, 1.0]],
        rhs: vec![],
        conditions: vec![Condition::point(0.0, 0, example1_y0())],
        filter: Some(example1_filter()),
    }
}

/// Monomial coefficients of `(1+α²-2αt)²`.
pub fn example2_leading(alpha: f64) -> Vec<f64> {
    let s = 1.0 + alpha * alpha;
    vec![s * s, -4.0 * alpha * s, 4.0 * alpha * alpha]
}

pub fn example2_problem(alpha: f64, n: usize) -> Result<ProblemSpec, OracleError> {
    let o = example2_oracle(alpha)?;
    Ok(ProblemSpec {
        basis: BasisKind::Legendre,
        n,
        nu: 2,
        p: vec![vec![-15.0 * alpha * alpha], vec![], example2_leading(alpha)],
        rhs: vec![],
        conditions: vec![
            Condition::point(-1.0, 0, o.y_minus_one()),
            Condition::point(1.0, 0, o.y_plus_one()),
        ],
        filter: Some(example1_filter()),
    })
}

/// A built-in oracle recognized from a problem's operator and conditions.
#[derive(Clone, Debug, PartialEq)]
pub enum BuiltinOracle {
    Example1,
    Example2(Example2Oracle),
}

impl BuiltinOracle {
    /// Exact coefficients `c_0, …, c_n`.
    pub fn exact_coeffs(&self, n: usize) -> Vec<f64> {
        match self {
            BuiltinOracle::Example1 => (0..=n).map(example1_coeff).collect(),
            BuiltinOracle::Example2(o) => o.coeffs(n),
        }
    }

    pub fn y(&self, t: f64) -> f64 {
        match self {
            BuiltinOracle::Example1 => Example1Oracle::y(t),
            BuiltinOracle::Example2(o) => o.y(t),
        }
    }

    /// `‖y - y_n‖_w` for computed coefficients `c_0^{(n)}, …, c_n^{(n)}`.
    pub fn error_norm(&self, tau: &[f64]) -> f64 {
        match self {
            BuiltinOracle::Example1 => {
                let n = tau.len() - 1;
                let head: f64 = tau
                    .iter()
                    .enumerate()
                    .map(|(k, t)| {
                        let d = example1_coeff(k) - t;
                        OrthoBasis::chebyshev().mu(k) * d * d
                    })
                    .sum();
                (head + example1_tail_sq(n)).sqrt()
            }
            BuiltinOracle::Example2(o) => o.error_norm(tau),
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn same_poly(a: &[f64], b: &[f64]) -> bool {
    let len = a.len().max(b.len());
    (0..len).all(|i| close(a.get(i).copied().unwrap_or(0.0), b.get(i).copied().unwrap_or(0.0)))
}

fn same_operator(spec: &ProblemSpec, reference: &ProblemSpec) -> bool {
    spec.basis == reference.basis
        && spec.nu == reference.nu
        && spec.p.iter().zip(&reference.p).all(|(a, b)| same_poly(a, b))
        && same_poly(&spec.rhs, &reference.rhs)
        && spec.conditions.len() == reference.conditions.len()
        && spec.conditions.iter().zip(&reference.conditions).all(|(a, b)| {
            close(a.value, b.value)
                && a.terms.len() == b.terms.len()
                && a.terms.iter().zip(&b.terms).all(|(x, y)| {
                    x.order == y.order && close(x.point, y.point) && close(x.weight, y.weight)
                })
        })
}

/// Recognizes Example 1 or Example 2 (any admissible α) up to rounding.
pub fn detect_oracle(spec: &ProblemSpec) -> Option<BuiltinOracle> {
    if same_operator(spec, &example1_problem(spec.n)) {
        return Some(BuiltinOracle::Example1);
    }
    let lead = spec.p.get(2)?;
    if spec.p.len() != 3 || lead.len() < 3 || lead[2] <= 0.0 {
        return None;
    }
    let magnitude = (lead[2] / 4.0).sqrt();
    let alpha = if lead[1] > 0.0 { -magnitude } else { magnitude };
    let reference = example2_problem(alpha, spec.n).ok()?;
    same_operator(spec, &reference).then(|| BuiltinOracle::Example2(Example2Oracle { alpha }))
}
