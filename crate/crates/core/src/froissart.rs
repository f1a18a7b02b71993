//! Froissart doublet diagnostics over a grid of Frobenius-Padé approximants.
//!
//! A doublet is a (pole, zero) pair closer than a tolerance. The table of
//! doublet counts `n_{p,q}` locates the "clean" approximants usable as
//! filters.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpade::{HTable, RationalApproximant};
use crate::orthopoly::{CoeffSeries, OrthoBasis};

pub const DEFAULT_TOL: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroPoleSet {
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
    pub p: usize,
    pub q: usize,
}

fn roots_or_empty(s: &CoeffSeries) -> Result<Vec<Complex64>> {
    match s.roots() {
        Err(Error::ConstantPolynomial) => Ok(Vec::new()),
        other => other,
    }
}

/// Zeros and poles of `Φ_{p,q}` after trimming negligible trailing
/// coefficients. Constant numerator or denominator gives an empty set; the
/// only failure is a stalled eigenvalue iteration.
pub fn zeros_poles(r: &RationalApproximant) -> Result<ZeroPoleSet> {
    Ok(ZeroPoleSet {
        zeros: roots_or_empty(&r.numerator)?,
        poles: roots_or_empty(&r.denominator)?,
        p: r.p,
        q: r.q,
    })
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Number of (pole, zero) pairs closer than `tol`, matched globally greedily:
/// the closest remaining pair is taken first and each root is used once.
pub fn count_doublets(zp: &ZeroPoleSet, tol: f64) -> usize {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, pole) in zp.poles.iter().enumerate() {
        for (j, zero) in zp.zeros.iter().enumerate() {
            let d = (pole - zero).norm();
            if d < tol {
                pairs.push((d, i, j));
            }
        }
    }
    // ties are broken by root values so the result ignores input order
    pairs.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| cmp_complex(&zp.poles[a.1], &zp.poles[b.1]))
            .then_with(|| cmp_complex(&zp.zeros[a.2], &zp.zeros[b.2]))
    });
    let mut pole_used = vec![false; zp.poles.len()];
    let mut zero_used = vec![false; zp.zeros.len()];
    let mut count = 0;
    for (_, i, j) in pairs {
        if !pole_used[i] && !zero_used[j] {
            pole_used[i] = true;
            zero_used[j] = true;
            count += 1;
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Count(usize),
    Failed(String),
}

impl Cell {
    pub fn count(&self) -> Option<usize> {
        match self {
            Cell::Count(n) => Some(*n),
            Cell::Failed(_) => None,
        }
    }
}

/// Doublet counts `n_{p,q}` for `1 ≤ p ≤ pmax`, `1 ≤ q ≤ qmax`.
#[derive(Clone, Debug, PartialEq)]
pub struct FroissartTable {
    pub tol: f64,
    pub pmax: usize,
    pub qmax: usize,
    /// row-major in `p`, then `q`
    cells: Vec<Cell>,
}

impl FroissartTable {
    pub fn cell(&self, p: usize, q: usize) -> &Cell {
        assert!((1..=self.pmax).contains(&p) && (1..=self.qmax).contains(&q));
        &self.cells[(p - 1) * self.qmax + (q - 1)]
    }

    /// `((p, q), cell)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Cell)> {
        let qmax = self.qmax;
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, c)| ((k / qmax + 1, k % qmax + 1), c))
    }

    pub fn failures(&self) -> Vec<(usize, usize)> {
        self.iter()
            .filter(|(_, c)| matches!(c, Cell::Failed(_)))
            .map(|(pq, _)| pq)
            .collect()
    }
}

/// Evaluates one cell from a shared h-table.
pub fn table_cell(table: &HTable, p: usize, q: usize, tol: f64) -> Cell {
    let counted = table
        .approximant(p, q)
        .and_then(|r| zeros_poles(&r))
        .map(|zp| count_doublets(&zp, tol));
    match counted {
        Ok(n) => Cell::Count(n),
        Err(e) => Cell::Failed(e.to_string()),
    }
}

/// Builds the table; cells are computed in parallel and assembled by
/// position. Construction failures are stored per cell.
pub fn froissart_table(
    basis: OrthoBasis,
    c: &CoeffSeries,
    pmax: usize,
    qmax: usize,
    tol: f64,
) -> FroissartTable {
    let source = CoeffSeries::new(basis, c.coeffs().to_vec());
    let table = HTable::triangular(&source, qmax);
    let cells = (0..pmax * qmax)
        .into_par_iter()
        .map(|k| table_cell(&table, k / qmax + 1, k % qmax + 1, tol))
        .collect();
    FroissartTable {
        tol,
        pmax,
        qmax,
        cells,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterStrategy {
    /// Largest `p` with a successful, doublet-free diagonal cell `(p, p)`.
    #[default]
    MaxCleanDiagonal,
}

impl FromStr for FilterStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "max_clean_diagonal" => Ok(FilterStrategy::MaxCleanDiagonal),
            _ => Err(format!("unknown filter strategy `{s}`")),
        }
    }
}

impl fmt::Display for FilterStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterStrategy::MaxCleanDiagonal => f.write_str("max_clean_diagonal"),
        }
    }
}

pub fn select_filter(table: &FroissartTable, strategy: FilterStrategy) -> Option<(usize, usize)> {
    match strategy {
        FilterStrategy::MaxCleanDiagonal => (1..=table.pmax.min(table.qmax))
            .rev()
            .find(|&p| table.cell(p, p).count() == Some(0))
            .map(|p| (p, p)),
    }
}
