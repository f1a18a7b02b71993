//! Frobenius-Padé (linear Padé) approximants from orthogonal series.
//!
//! `Φ_{p,q} = N/D = Σ_{i≤p} a_i φ_i / Σ_{i≤q} b_i φ_i` with `b_q = 1` is
//! defined by `D·y - N = Σ_{i>p+q} e_i φ_i`. Writing `φ_j y = Σ_i h_{i,j} φ_i`,
//! the denominator solves `H b = -h` (rows `p+1..=p+q` of the h-table) and
//! the numerator is `a = G b + g` (rows `0..=p`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::orthopoly::{BasisKind, CoeffSeries, OrthoBasis};

/// `H^{[p/q]}` systems with a larger condition estimate are rejected. Only
/// numerically singular systems fail; ill-conditioning shows up as doublets.
pub const MAX_CONDITION: f64 = f64::INFINITY;

/// Relative tolerance for the nondegeneracy hypotheses of the closed forms.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// Coefficients `h_{i,j}` of `φ_j y`, stored for every `i + j <= n` where
/// `n` is the degree of the source series. Entries needing coefficients past
/// `c_n` are unavailable rather than zero-padded.
#[derive(Clone, Debug, PartialEq)]
pub struct HTable {
    source: CoeffSeries,
    /// `columns[j][i] = h_{i,j}`
    columns: Vec<Vec<f64>>,
}

#[derive(Clone, Copy)]
enum Rule {
    Specialized,
    General,
}

impl HTable {
    /// All available entries with column index `<= max_col`, using the
    /// Chebyshev/Legendre specialized recurrences.
    pub fn triangular(source: &CoeffSeries, max_col: usize) -> Self {
        Self::build(source, max_col, Rule::Specialized)
    }

    /// Same table from the general three-term recurrence.
    pub fn triangular_general(source: &CoeffSeries, max_col: usize) -> Self {
        Self::build(source, max_col, Rule::General)
    }

    fn build(source: &CoeffSeries, max_col: usize, rule: Rule) -> Self {
        let c = source.coeffs();
        let basis = source.basis();
        let Some(n) = c.len().checked_sub(1) else {
            return Self {
                source: source.clone(),
                columns: Vec::new(),
            };
        };
        let max_col = max_col.min(n);
        let mut columns: Vec<Vec<f64>> = Vec::with_capacity(max_col + 1);
        columns.push(c.to_vec());
        for j in 0..max_col {
            // column j+1 holds rows 0..=n-j-1
            let rows = n - j;
            let mut next = vec![0.0; rows];
            next[0] = basis.mu(j + 1) / basis.mu(0) * c[j + 1];
            for i in 1..rows {
                let prev = if j >= 1 {
                    columns[j - 1][i]
                } else {
                    0.0
                };
                let col = &columns[j];
                next[i] = match (rule, basis.kind()) {
                    (Rule::Specialized, BasisKind::Chebyshev) => {
                        chebyshev_rule(col, prev, i, j)
                    }
                    (Rule::Specialized, BasisKind::Legendre) => {
                        legendre_rule(col, prev, i, j)
                    }
                    (Rule::General, _) => general_rule(basis, col, prev, i, j),
                };
            }
            columns.push(next);
        }
        Self {
            source: source.clone(),
            columns,
        }
    }

    pub fn basis(&self) -> OrthoBasis {
        self.source.basis()
    }

    pub fn source(&self) -> &CoeffSeries {
        &self.source
    }

    /// Largest stored column index.
    pub fn max_col(&self) -> Option<usize> {
        self.columns.len().checked_sub(1)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.columns.get(j).and_then(|col| col.get(i)).copied()
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.columns[j][i]
    }

    /// Normalized `(p,q)` approximant from this table.
    pub fn approximant(&self, p: usize, q: usize) -> Result<RationalApproximant> {
        let n = self.source.degree();
        let needed = p + 2 * q;
        if self.source.is_empty() || needed > n || self.max_col().is_none_or(|m| m < q) {
            return Err(Error::InsufficientCoefficients {
                p,
                q,
                needed,
                available: n,
            });
        }
        let basis = self.basis();

        let (b, condition_estimate) = if q == 0 {
            (Vec::new(), 1.0)
        } else {
            let h = DMatrix::from_fn(q, q, |r, k| self.at(p + 1 + r, k));
            let rhs = DVector::from_fn(q, |r, _| -self.at(p + 1 + r, q));
            let (x, cond) = linalg::solve(h, &rhs, MAX_CONDITION)?;
            (x.iter().copied().collect::<Vec<_>>(), cond)
        };
        let mut denominator = b;
        denominator.push(1.0);

        let row = |i: usize| -> f64 {
            denominator
                .iter()
                .enumerate()
                .map(|(k, bk)| self.at(i, k) * bk)
                .sum()
        };
        let numerator: Vec<f64> = (0..=p).map(row).collect();
        let residual_norm = (0..=p + q)
            .map(|i| {
                let a = numerator.get(i).copied().unwrap_or(0.0);
                (row(i) - a).abs()
            })
            .fold(0.0, f64::max);

        Ok(RationalApproximant {
            numerator: CoeffSeries::new(basis, numerator),
            denominator: CoeffSeries::new(basis, denominator),
            p,
            q,
            residual_norm,
            condition_estimate,
        })
    }
}

fn chebyshev_rule(col: &[f64], prev: f64, i: usize, j: usize) -> f64 {
    match (i, j) {
        (1, 0) => col[0] + 0.5 * col[2],
        (_, 0) => 0.5 * (col[i - 1] + col[i + 1]),
        (1, _) => 2.0 * col[0] + col[2] - prev,
        _ => col[i - 1] + col[i + 1] - prev,
    }
}

fn legendre_rule(col: &[f64], prev: f64, i: usize, j: usize) -> f64 {
    let (fi, fj) = (i as f64, j as f64);
    let inner = (fi + 1.0) / (2.0 * fi + 3.0) * col[i + 1] + fi / (2.0 * fi - 1.0) * col[i - 1];
    (2.0 * fj + 1.0) / (fj + 1.0) * inner - fj / (fj + 1.0) * prev
}

fn general_rule(basis: OrthoBasis, col: &[f64], prev: f64, i: usize, j: usize) -> f64 {
    let b = basis;
    let up = b.mu(i + 1) / b.mu(i) * b.alpha(i) * col[i + 1];
    let centre = (b.beta(i) - b.beta(j)) * col[i];
    let down = b.mu(i - 1) / b.mu(i) * b.gamma(i) * col[i - 1];
    (up + centre + down - b.gamma(j) * prev) / b.alpha(j)
}

/// `rows × cols` block of the h-table (`0 ≤ i ≤ rows`, `0 ≤ j ≤ cols`).
pub fn h_table(basis: OrthoBasis, c: &CoeffSeries, rows: usize, cols: usize) -> Result<HTable> {
    if c.basis() != basis {
        return Err(Error::BasisMismatch(format!(
            "series is in the {} basis, table requested in {}",
            c.basis().kind(),
            basis.kind()
        )));
    }
    let available = c.degree();
    if c.is_empty() || rows + cols > available {
        return Err(Error::TableTooLarge {
            rows,
            cols,
            needed: rows + cols,
            available,
            max_rows: available.saturating_sub(cols),
            max_cols: available.saturating_sub(rows),
        });
    }
    Ok(HTable::triangular(c, cols))
}

/// `Φ_{p,q}` normalized with `b_q = 1`.
pub fn frobenius_pade(
    basis: OrthoBasis,
    c: &CoeffSeries,
    p: usize,
    q: usize,
) -> Result<RationalApproximant> {
    let c = if c.basis() == basis {
        c.clone()
    } else {
        return Err(Error::BasisMismatch(format!(
            "series is in the {} basis, approximant requested in {}",
            c.basis().kind(),
            basis.kind()
        )));
    };
    HTable::triangular(&c, q).approximant(p, q)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalApproximant {
    pub numerator: CoeffSeries,
    /// `b_0, …, b_{q-1}, 1`
    pub denominator: CoeffSeries,
    pub p: usize,
    pub q: usize,
    /// `max |e_i|`, `i ≤ p+q`, of the defining relation recomputed from the
    /// h-table.
    pub residual_norm: f64,
    pub condition_estimate: f64,
}

impl RationalApproximant {
    pub fn eval(&self, t: f64) -> Result<f64> {
        let d = self.denominator.eval(t)?;
        if d.abs() <= 1e-30 {
            return Err(Error::PoleProximity { t, value: d });
        }
        Ok(self.numerator.eval(t)? / d)
    }

    pub fn basis(&self) -> OrthoBasis {
        self.numerator.basis()
    }
}

/// Closed-form coefficient access for the direct formulas.
struct Coeffs<'a> {
    c: &'a [f64],
}

impl Coeffs<'_> {
    fn get(&self, k: usize) -> f64 {
        self.c[k]
    }

    /// `c'_k` with `c'_0 = 2 c_0`; negative indices reflect.
    fn primed(&self, k: isize) -> f64 {
        match k {
            0 => 2.0 * self.c[0],
            _ => self.c[k.unsigned_abs()],
        }
    }

    /// Chebyshev `h_{k,j}`, the `T_k` coefficient of `T_j y`.
    fn cheb_h(&self, k: usize, j: usize) -> f64 {
        match (k, j) {
            (0, 0) => self.c[0],
            (0, _) => 0.5 * self.c[j],
            _ => 0.5 * (self.primed(k as isize - j as isize) + self.c[k + j]),
        }
    }

    /// Legendre `h_{k,1}`, the `P_k` coefficient of `t y`.
    fn leg_h1(&self, k: usize) -> f64 {
        let f = k as f64;
        let down = if k >= 1 {
            f / (2.0 * f - 1.0) * self.c[k - 1]
        } else {
            0.0
        };
        down + (f + 1.0) / (2.0 * f + 3.0) * self.c[k + 1]
    }

    /// Legendre `h_{k,2}`, the `P_k` coefficient of `P_2 y`.
    fn leg_h2(&self, k: usize) -> f64 {
        let c = self.c;
        match k {
            0 => c[2] / 5.0,
            1 => 0.4 * c[1] + 9.0 / 35.0 * c[3],
            _ => {
                let f = k as f64;
                let lead = 3.0 * (f * f - 1.0) / (2.0 * (2.0 * f + 3.0) * (2.0 * f - 1.0));
                let lower = ((4.0 * f + 3.0) / ((2.0 * f - 3.0) * (f + 1.0)) + 1.0) * c[k - 2];
                let centre = 2.0 * f / (3.0 * (f - 1.0)) * c[k];
                let upper = (3.0 / ((2.0 * f + 5.0) * (f - 1.0)) + 1.0) * c[k + 2];
                lead * (lower + centre + upper)
            }
        }
    }
}

fn check_direct(c: &[f64], p: usize, q: usize) -> Result<f64> {
    if !(1..=2).contains(&q) {
        return Err(Error::UnsupportedDirectOrder(q));
    }
    let needed = p + 2 * q;
    if c.len() <= needed {
        return Err(Error::InsufficientCoefficients {
            p,
            q,
            needed,
            available: c.len().saturating_sub(1),
        });
    }
    Ok(c[p..=needed].iter().fold(0.0, |m, x| m.max(x.abs())))
}

fn degenerate(p: usize, q: usize, reason: &str) -> Error {
    Error::Degenerate {
        p,
        q,
        reason: reason.to_string(),
    }
}

/// Denominator `b_0, …, b_{q-1}` from the closed forms, `q ∈ {1, 2}`.
fn direct_denominator(kind: BasisKind, c: &[f64], p: usize, q: usize) -> Result<Vec<f64>> {
    let scale = check_direct(c, p, q)?;
    let s = Coeffs { c };
    let lead = s.get(p + 1);
    match q {
        1 => {
            if lead.abs() <= DEGENERACY_TOL * scale {
                return Err(degenerate(p, q, "c_{p+1} vanishes"));
            }
            let b0 = match kind {
                BasisKind::Chebyshev => -(s.primed(p as isize) + s.get(p + 2)) / (2.0 * lead),
                BasisKind::Legendre => -s.leg_h1(p + 1) / lead,
            };
            Ok(vec![b0])
        }
        _ => {
            // H = [[c_{p+1}, h_{p+1,1}], [c_{p+2}, h_{p+2,1}]], rhs -[h_{p+1,2}, h_{p+2,2}]
            let (h11, h21, h12, h22) = match kind {
                BasisKind::Chebyshev => (
                    s.cheb_h(p + 1, 1),
                    s.cheb_h(p + 2, 1),
                    s.cheb_h(p + 1, 2),
                    s.cheb_h(p + 2, 2),
                ),
                BasisKind::Legendre => (
                    s.leg_h1(p + 1),
                    s.leg_h1(p + 2),
                    s.leg_h2(p + 1),
                    s.leg_h2(p + 2),
                ),
            };
            let c1 = lead;
            let c2 = s.get(p + 2);
            let delta = c1 * h21 - h11 * c2;
            if delta.abs() <= DEGENERACY_TOL * scale * scale {
                return Err(degenerate(p, q, "determinant vanishes"));
            }
            let b0 = -(h12 * h21 - h11 * h22) / delta;
            let b1 = -(c1 * h22 - h12 * c2) / delta;
            Ok(vec![b0, b1])
        }
    }
}

/// Closed-form `(p,1)` and `(p,2)` Chebyshev-Padé and Legendre-Padé
/// approximants.
pub fn direct_pade(kind: BasisKind, c: &[f64], p: usize, q: usize) -> Result<RationalApproximant> {
    let b = direct_denominator(kind, c, p, q)?;
    let s = Coeffs { c };
    let numerator: Vec<f64> = (0..=p)
        .map(|k| match (kind, q) {
            (BasisKind::Chebyshev, 1) => {
                let lower = if k >= 1 { s.primed(k as isize - 1) } else { 0.0 };
                0.5 * (lower + s.get(k + 1) + 2.0 * b[0] * s.get(k))
            }
            (BasisKind::Chebyshev, _) => {
                s.cheb_h(k, 0) * b[0] + s.cheb_h(k, 1) * b[1] + s.cheb_h(k, 2)
            }
            (BasisKind::Legendre, 1) => s.leg_h1(k) + b[0] * s.get(k),
            (BasisKind::Legendre, _) => s.get(k) * b[0] + s.leg_h1(k) * b[1] + s.leg_h2(k),
        })
        .collect();
    let basis = OrthoBasis::new(kind);
    let mut denominator = b;
    denominator.push(1.0);
    let approx = RationalApproximant {
        numerator: CoeffSeries::new(basis, numerator),
        denominator: CoeffSeries::new(basis, denominator),
        p,
        q,
        residual_norm: 0.0,
        condition_estimate: f64::NAN,
    };
    Ok(approx)
}

/// Poles of `Φ_{p,q}`, `q ∈ {1, 2}`, straight from the coefficients.
pub fn direct_poles(kind: BasisKind, c: &[f64], p: usize, q: usize) -> Result<Vec<Complex64>> {
    let b = direct_denominator(kind, c, p, q)?;
    if q == 1 {
        return Ok(vec![Complex64::new(-b[0], 0.0)]);
    }
    let (b0, b1) = (b[0], b[1]);
    // Chebyshev: 2t² + b1 t + (b0 - 1); Legendre: 1.5t² + b1 t + (b0 - 0.5)
    let (disc, denom) = match kind {
        BasisKind::Chebyshev => (b1 * b1 - 8.0 * (b0 - 1.0), 4.0),
        BasisKind::Legendre => (b1 * b1 - 6.0 * b0 + 3.0, 3.0),
    };
    let root = Complex64::new(disc, 0.0).sqrt();
    Ok(vec![(-b1 + root) / denom, (-b1 - root) / denom])
}
