//! Quadrature-based projections, independent of the library's h-table and
//! Clenshaw code.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use taupade::BasisKind;

/// `φ_0(x), …, φ_n(x)` by the textbook recurrences.
pub fn basis_values(kind: BasisKind, n: usize, x: f64) -> Vec<f64> {
    let mut v = vec![1.0, x];
    for k in 1..n {
        let kf = k as f64;
        let next = match kind {
            BasisKind::Chebyshev => 2.0 * x * v[k] - v[k - 1],
            BasisKind::Legendre => ((2.0 * kf + 1.0) * x * v[k] - kf * v[k - 1]) / (kf + 1.0),
        };
        v.push(next);
    }
    v.truncate(n + 1);
    v
}

/// Gauss-Legendre nodes and weights by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 1..m {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Nodes and weights for `∫ w f` with the basis' orthogonality weight.
pub fn gauss(kind: BasisKind, m: usize) -> (Vec<f64>, Vec<f64>) {
    match kind {
        BasisKind::Chebyshev => (
            (0..m)
                .map(|j| (PI * (2 * j + 1) as f64 / (2 * m) as f64).cos())
                .collect(),
            vec![PI / m as f64; m],
        ),
        BasisKind::Legendre => gauss_legendre(m),
    }
}

pub fn norm_sq(kind: BasisKind, k: usize) -> f64 {
    match (kind, k) {
        (BasisKind::Chebyshev, 0) => PI,
        (BasisKind::Chebyshev, _) => PI / 2.0,
        (BasisKind::Legendre, _) => 2.0 / (2 * k + 1) as f64,
    }
}

/// Coefficients `0..=n` of `f` by `m`-point Gauss quadrature.
pub fn project(kind: BasisKind, f: impl Fn(f64) -> f64, n: usize, m: usize) -> Vec<f64> {
    let (x, w) = gauss(kind, m);
    let mut c = vec![0.0; n + 1];
    for (xj, wj) in x.iter().zip(&w) {
        let fx = f(*xj);
        for (k, pk) in basis_values(kind, n, *xj).into_iter().enumerate() {
            c[k] += wj * fx * pk;
        }
    }
    for (k, ck) in c.iter_mut().enumerate() {
        *ck /= norm_sq(kind, k);
    }
    c
}

/// Evaluates `Σ c_k φ_k(x)` by direct summation.
pub fn eval(kind: BasisKind, c: &[f64], x: f64) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    basis_values(kind, c.len() - 1, x)
        .iter()
        .zip(c)
        .map(|(p, c)| p * c)
        .sum()
}

/// Rational `f(t) = r_0 + Σ_j r_j/(z_j - t)` with `z_j` off `[-1, 1]`.
/// Residue/pole pairs should come in conjugates so that `f` is real.
pub struct PartialFractions {
    pub constant: f64,
    pub terms: Vec<(Complex64, Complex64)>,
}

impl PartialFractions {
    pub fn eval(&self, t: f64) -> f64 {
        let s: Complex64 = self.terms.iter().map(|(r, z)| r / (z - t)).sum();
        self.constant + s.re
    }

    /// Exact expansion coefficients `0..=n`, accurate to relative rounding.
    pub fn coeffs(&self, kind: BasisKind, n: usize) -> Vec<f64> {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        for (r, z) in &self.terms {
            for (ck, e) in c.iter_mut().zip(cauchy_coeffs(kind, *z, n)) {
                *ck += r * e;
            }
        }
        c[0] += self.constant;
        c.into_iter().map(|z| z.re).collect()
    }
}

/// Coefficients of `1/(z - t)`.
fn cauchy_coeffs(kind: BasisKind, z: Complex64, n: usize) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let s = (z - one).sqrt() * (z + one).sqrt();
    match kind {
        BasisKind::Chebyshev => {
            // 1/(z-t) = (2/s) Σ' w^{-k} T_k(t), w = z + s
            let r = one / (z + s);
            let mut out = Vec::with_capacity(n + 1);
            let mut pow = 2.0 / s;
            for k in 0..=n {
                out.push(if k == 0 { pow / 2.0 } else { pow });
                pow *= r;
            }
            out
        }
        BasisKind::Legendre => {
            // 1/(z-t) = Σ (2k+1) Q_k(z) P_k(t); Q_k by backward recurrence
            let top = n + 400;
            let mut q = vec![Complex64::new(0.0, 0.0); top + 2];
            q[top] = one;
            for k in (1..=top).rev() {
                let kf = k as f64;
                q[k - 1] = ((2.0 * kf + 1.0) * z * q[k] - (kf + 1.0) * q[k + 1]) / kf;
                if q[k - 1].norm() > 1e100 {
                    for v in q.iter_mut().skip(k - 1) {
                        *v *= 1e-100;
                    }
                }
            }
            let q0 = 0.5 * ((z + one) / (z - one)).ln();
            let scale = q0 / q[0];
            (0..=n).map(|k| (2 * k + 1) as f64 * q[k] * scale).collect()
        }
    }
}

/// `φ_k'(x)` for interior `x` from the classical closed forms.
pub fn basis_derivatives(kind: BasisKind, n: usize, x: f64) -> Vec<f64> {
    match kind {
        BasisKind::Chebyshev => {
            // T_k' = k U_{k-1}
            let mut u = vec![1.0, 2.0 * x];
            for k in 2..n {
                u.push(2.0 * x * u[k - 1] - u[k - 2]);
            }
            (0..=n).map(|k| if k == 0 { 0.0 } else { k as f64 * u[k - 1] }).collect()
        }
        BasisKind::Legendre => {
            // (x² - 1) P_k' = k (x P_k - P_{k-1})
            let p = basis_values(kind, n, x);
            (0..=n)
                .map(|k| {
                    if k == 0 {
                        0.0
                    } else {
                        k as f64 * (x * p[k] - p[k - 1]) / (x * x - 1.0)
                    }
                })
                .collect()
        }
    }
}

/// Example 1 exact Chebyshev coefficient.
pub fn example1_coeff(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        let kf = k as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sign * 2.0 / (4.0 * kf * kf - 1.0)
    }
}

pub fn example1_y0() -> f64 {
    PI * 2f64.sqrt() / 4.0
}

pub fn example1_y(t: f64) -> f64 {
    PI * (2.0 * (t + 1.0)).sqrt() / 4.0
}
