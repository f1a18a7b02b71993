//! Operational Tau method for `D y = f` with
//! `D = Σ_{i=0}^{ν} p_i(t) dⁱ/dtⁱ`, `p_i` polynomials given by monomial
//! coefficients.
//!
//! The operator acts on coefficient row vectors through
//! `Π_φ = Σ_i η_φⁱ p_i(μ_φ)`; the Tau system is `y Γ_φ = [σ | f]` with
//! `Γ_φ = [G  Π̄_φ]`, where `G` holds the condition functionals evaluated on
//! the basis and `Π̄_φ` keeps the first `n+1-ν` columns of `Π_φ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::orthopoly::{CoeffSeries, OrthoBasis};

/// Solves whose `Γ` condition estimate exceeds this are rejected.
pub const MAX_CONDITION: f64 = 1e14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionTerm {
    pub point: f64,
    pub order: usize,
    pub weight: f64,
}

/// Linear side condition `Σ weight · y^{(order)}(point) = value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Condition {
    pub terms: Vec<ConditionTerm>,
    pub value: f64,
}

impl Condition {
    /// `y^{(order)}(point) = value`.
    pub fn point(point: f64, order: usize, value: f64) -> Self {
        Self {
            terms: vec![ConditionTerm {
                point,
                order,
                weight: 1.0,
            }],
            value,
        }
    }

    pub fn homogeneous(&self) -> Self {
        Self {
            terms: self.terms.clone(),
            value: 0.0,
        }
    }

    /// Applies the functional to a series.
    pub fn apply(&self, y: &CoeffSeries) -> Result<f64> {
        let mut acc = 0.0;
        for term in &self.terms {
            let mut d = y.clone();
            for _ in 0..term.order {
                d = d.derivative();
            }
            acc += term.weight * d.eval(term.point)?;
        }
        Ok(acc)
    }
}

/// Differential operator of order `ν` with its right-hand side (basis
/// coefficients of `f`) and `ν` side conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyOperator {
    coeffs: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    conditions: Vec<Condition>,
}

fn poly_degree(p: &[f64]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0.0)
}

impl PolyOperator {
    /// `coeffs[i]` holds the monomial coefficients of `p_i` (index `i` is the
    /// derivative order).
    pub fn new(coeffs: Vec<Vec<f64>>, rhs: Vec<f64>, conditions: Vec<Condition>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidOperator(msg));
        let Some(top) = coeffs.last() else {
            return invalid("at least one coefficient polynomial is required".into());
        };
        let nu = coeffs.len() - 1;
        if poly_degree(top).is_none() {
            return invalid(format!("leading coefficient p_{nu} is identically zero"));
        }
        if coeffs.iter().flatten().chain(&rhs).any(|c| !c.is_finite()) {
            return invalid("non-finite coefficient".into());
        }
        if conditions.len() != nu {
            return invalid(format!(
                "order {nu} needs {nu} conditions, got {}",
                conditions.len()
            ));
        }
        for (k, cond) in conditions.iter().enumerate() {
            if cond.terms.is_empty() {
                return invalid(format!("condition {k} has no terms"));
            }
            if !cond.value.is_finite() {
                return invalid(format!("condition {k} has a non-finite value"));
            }
            for term in &cond.terms {
                if term.order >= nu {
                    return invalid(format!(
                        "condition {k} uses derivative order {} >= {nu}",
                        term.order
                    ));
                }
                if !(-1.0..=1.0).contains(&term.point) || !term.weight.is_finite() {
                    return invalid(format!(
                        "condition {k} has point {} outside [-1, 1] or bad weight",
                        term.point
                    ));
                }
            }
        }
        Ok(Self {
            coeffs,
            rhs,
            conditions,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    /// Largest monomial degree among the `p_i`.
    pub fn max_coeff_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|p| poly_degree(p))
            .max()
            .unwrap_or(0)
    }

    /// How far `D` can raise the degree of a polynomial, `max(0, deg p_i - i)`.
    pub fn degree_raise(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, p)| poly_degree(p).map(|d| d.saturating_sub(i)))
            .max()
            .unwrap_or(0)
    }

    /// Same operator, new forcing, all condition values set to zero.
    pub fn homogeneous_with_rhs(&self, rhs: Vec<f64>) -> Self {
        Self {
            coeffs: self.coeffs.clone(),
            rhs,
            conditions: self.conditions.iter().map(Condition::homogeneous).collect(),
        }
    }
}

/// `p(μ)` by Horner's rule on matrices.
fn matrix_poly(p: &[f64], mu: &DMatrix<f64>) -> DMatrix<f64> {
    let w = mu.nrows();
    let Some(d) = poly_degree(p) else {
        return DMatrix::zeros(w, w);
    };
    let mut acc = DMatrix::identity(w, w) * p[d];
    for k in (0..d).rev() {
        acc = &acc * mu;
        for i in 0..w {
            acc[(i, i)] += p[k];
        }
    }
    acc
}

/// Rows `0..=n` and columns `0..=n+raise` of `Π_φ`, assembled at an oversized
/// working dimension so that truncation of `η` and `μ` never reaches them.
fn operator_rows(problem: &PolyOperator, basis: OrthoBasis, n: usize) -> DMatrix<f64> {
    let nu = problem.order();
    let work = n + 1 + nu + problem.max_coeff_degree();
    let eta = basis.derivative_matrix(work - 1);
    let mu = basis.shift_matrix(work - 1);
    let mut total = DMatrix::zeros(work, work);
    let mut eta_pow = DMatrix::identity(work, work);
    for (i, p) in problem.coefficients().iter().enumerate() {
        if i > 0 {
            eta_pow = &eta_pow * &eta;
        }
        if poly_degree(p).is_some() {
            total += &eta_pow * matrix_poly(p, &mu);
        }
    }
    let cols = n + 1 + problem.degree_raise();
    total.view((0, 0), (n + 1, cols)).into_owned()
}

/// Leading `(n+1)×(n+1)` block of `Π_φ = Σ η_φⁱ p_i(μ_φ)`.
pub fn build_pi(problem: &PolyOperator, basis: OrthoBasis, n: usize) -> DMatrix<f64> {
    operator_rows(problem, basis, n)
        .view((0, 0), (n + 1, n + 1))
        .into_owned()
}

/// Column of `G`: the condition functional applied to `φ_0, …, φ_n`.
pub fn condition_row(basis: OrthoBasis, cond: &Condition, n: usize) -> Vec<f64> {
    let eta = basis.derivative_matrix(n);
    let mut g = vec![0.0; n + 1];
    for term in &cond.terms {
        let mut v = DVector::from_vec(basis.values(n, term.point));
        for _ in 0..term.order {
            v = &eta * v;
        }
        for (gi, vi) in g.iter_mut().zip(v.iter()) {
            *gi += term.weight * vi;
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq)]
pub struct TauSolution {
    pub problem: PolyOperator,
    pub n: usize,
    /// `c_0^{(n)}, …, c_n^{(n)}`.
    pub coeffs: CoeffSeries,
    /// Condition functional applied to `y_n`, minus the prescribed value.
    pub condition_residuals: Vec<f64>,
    pub system_condition_estimate: f64,
}

/// Degree-`n` Tau approximation `y_n`.
pub fn tau_solve(problem: &PolyOperator, basis: OrthoBasis, n: usize) -> Result<TauSolution> {
    TauSystem::new(problem, basis, n).solve(n)
}

/// `Π_φ` and the condition columns assembled once up to degree `nmax`, for
/// solving at every `n ≤ nmax` without rebuilding them.
#[derive(Clone, Debug)]
pub struct TauSystem {
    problem: PolyOperator,
    basis: OrthoBasis,
    nmax: usize,
    pi: DMatrix<f64>,
    g: Vec<Vec<f64>>,
}

impl TauSystem {
    pub fn new(problem: &PolyOperator, basis: OrthoBasis, nmax: usize) -> Self {
        let g = problem
            .conditions()
            .iter()
            .map(|c| condition_row(basis, c, nmax))
            .collect();
        Self {
            problem: problem.clone(),
            basis,
            nmax,
            pi: operator_rows(problem, basis, nmax),
            g,
        }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn solve(&self, n: usize) -> Result<TauSolution> {
        let problem = &self.problem;
        let nu = problem.order();
        if n < nu {
            return Err(Error::DegreeTooSmall { n, nu });
        }
        assert!(n <= self.nmax, "degree {n} exceeds the assembled {}", self.nmax);
        let size = n + 1;

        // Γ^T: row k is column k of Γ = [G | Π̄].
        let mut gamma_t = DMatrix::zeros(size, size);
        let mut rhs = DVector::zeros(size);
        for (k, (g, cond)) in self.g.iter().zip(problem.conditions()).enumerate() {
            for i in 0..size {
                gamma_t[(k, i)] = g[i];
            }
            rhs[k] = cond.value;
        }
        for j in 0..size - nu {
            for i in 0..size {
                gamma_t[(nu + j, i)] = self.pi[(i, j)];
            }
            rhs[nu + j] = problem.rhs().get(j).copied().unwrap_or(0.0);
        }

        let (x, estimate) = linalg::solve(gamma_t, &rhs, MAX_CONDITION)?;
        let coeffs = CoeffSeries::new(self.basis, x.iter().copied().collect());
        let condition_residuals = problem
            .conditions()
            .iter()
            .map(|c| c.apply(&coeffs).map(|v| v - c.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(TauSolution {
            problem: problem.clone(),
            n,
            coeffs,
            condition_residuals,
            system_condition_estimate: estimate,
        })
    }
}

/// `τ_n = D y_n - f` as a series of degree `n + degree_raise` (or the
/// length of `f`, whichever is larger).
pub fn residual(problem: &PolyOperator, sol: &TauSolution) -> CoeffSeries {
    let basis = sol.coeffs.basis();
    let pi = operator_rows(problem, basis, sol.n);
    let len = pi.ncols().max(problem.rhs().len());
    let mut tau = vec![0.0; len];
    for (i, &c) in sol.coeffs.coeffs().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        for j in 0..pi.ncols() {
            tau[j] += c * pi[(i, j)];
        }
    }
    for (t, f) in tau.iter_mut().zip(problem.rhs()) {
        *t -= f;
    }
    CoeffSeries::new(basis, tau)
}

/// A-posteriori estimate `ẽ_{n+m}` of `y - y_n`: the degree-`(n+m)` Tau
/// solution of `D e = -τ_n` under homogeneous conditions.
pub fn error_estimate(problem: &PolyOperator, sol: &TauSolution, m: usize) -> Result<CoeffSeries> {
    let tau = residual(problem, sol);
    let forcing = tau.coeffs().iter().map(|c| -c).collect();
    let err_problem = problem.homogeneous_with_rhs(forcing);
    let basis = sol.coeffs.basis();
    Ok(tau_solve(&err_problem, basis, sol.n + m.max(1))?.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn example1_operator() -> PolyOperator {
        let y0 = std::f64::consts::PI * 2f64.sqrt() / 4.0;
        PolyOperator::new(
            vec![vec![-0.5], vec![1.0, 1.0]],
            vec![],
            vec![Condition::point(0.0, 0, y0)],
        )
        .unwrap()
    }

    fn linear_bvp() -> PolyOperator {
        PolyOperator::new(
            vec![vec![], vec![], vec![1.0]],
            vec![],
            vec![Condition::point(-1.0, 0, 0.0), Condition::point(1.0, 0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn identity_operator_gives_identity() {
        let op = PolyOperator::new(vec![vec![1.0]], vec![], vec![]).unwrap();
        for basis in [OrthoBasis::chebyshev(), OrthoBasis::legendre()] {
            let pi = build_pi(&op, basis, 6);
            assert_eq!(pi, DMatrix::identity(7, 7));
        }
    }

    #[test]
    fn example1_pi_matches_displayed_gamma() {
        let pi = build_pi(&example1_operator(), OrthoBasis::chebyshev(), 6);
        assert_relative_eq!(pi[(0, 0)], -0.5);
        assert_relative_eq!(pi[(1, 0)], 1.0);
        assert_relative_eq!(pi[(1, 1)], 0.5);
        assert_relative_eq!(pi[(2, 0)], 2.0);
        assert_relative_eq!(pi[(2, 1)], 4.0);
        assert_relative_eq!(pi[(2, 2)], 1.5);
        let row4 = [4.0, 8.0, 8.0, 8.0, 3.5];
        for (j, v) in row4.iter().enumerate() {
            assert_relative_eq!(pi[(4, j)], *v, epsilon = 1e-13);
        }
        // operator preserves degree: strictly upper part vanishes
        for i in 0..7 {
            for j in i + 1..7 {
                assert_eq!(pi[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn condition_rows() {
        let cheb = OrthoBasis::chebyshev();
        let g = condition_row(cheb, &Condition::point(0.0, 0, 1.0), 5);
        assert_eq!(g, vec![1.0, 0.0, -1.0, 0.0, 1.0, 0.0]);
        let g = condition_row(OrthoBasis::legendre(), &Condition::point(1.0, 0, 0.0), 5);
        for v in g {
            assert_relative_eq!(v, 1.0, epsilon = 1e-14);
        }
        let g = condition_row(cheb, &Condition::point(1.0, 1, 0.0), 12);
        for (i, v) in g.iter().enumerate() {
            assert_relative_eq!(*v, (i * i) as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn polynomial_exact_problem() {
        for basis in [OrthoBasis::chebyshev(), OrthoBasis::legendre()] {
            for n in [2, 5, 9] {
                let op = linear_bvp();
                let sol = tau_solve(&op, basis, n).unwrap();
                let c = sol.coeffs.coeffs();
                assert_relative_eq!(c[0], 0.5, epsilon = 1e-14);
                assert_relative_eq!(c[1], 0.5 / basis.alpha(0), epsilon = 1e-14);
                assert!(c[2..].iter().all(|x| x.abs() < 1e-14));
                let tau = residual(&op, &sol);
                assert!(tau.max_abs() < 1e-12);
                let e = error_estimate(&op, &sol, 3).unwrap();
                assert!(e.max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn example1_backward_recurrence() {
        let sol = tau_solve(&example1_operator(), OrthoBasis::chebyshev(), 30).unwrap();
        let c = sol.coeffs.coeffs();
        for k in 1..=28 {
            let kf = k as f64;
            let expect = -(2.0 * kf + 3.0) / (2.0 * kf - 1.0) * c[k + 1];
            assert_relative_eq!(c[k], expect, max_relative = 1e-12);
        }
        assert_relative_eq!(c[0], 1.5 * c[1], max_relative = 1e-12);
        assert!(sol.condition_residuals[0].abs() < 1e-12);
    }

    #[test]
    fn example1_residual_is_single_term() {
        let op = example1_operator();
        let n = 20;
        let sol = tau_solve(&op, OrthoBasis::chebyshev(), n).unwrap();
        let tau = residual(&op, &sol);
        let cn = sol.coeffs.coeffs()[n];
        assert_eq!(tau.len(), n + 1);
        assert_relative_eq!(tau.coeffs()[n], (n as f64 - 0.5) * cn, max_relative = 1e-12);
        assert!(tau.coeffs()[..n].iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn operator_validation() {
        let bad = |coeffs: Vec<Vec<f64>>, conds: Vec<Condition>| {
            matches!(
                PolyOperator::new(coeffs, vec![], conds),
                Err(Error::InvalidOperator(_))
            )
        };
        assert!(bad(vec![], vec![]));
        assert!(bad(vec![vec![1.0], vec![0.0]], vec![Condition::point(0.0, 0, 1.0)]));
        assert!(bad(
            vec![vec![1.0], vec![], vec![1.0]],
            vec![Condition::point(0.0, 0, 1.0)]
        ));
        assert!(bad(vec![vec![1.0], vec![1.0]], vec![Condition::point(0.0, 1, 1.0)]));
        assert!(bad(vec![vec![1.0], vec![1.0]], vec![Condition::point(2.0, 0, 1.0)]));
        assert!(bad(
            vec![vec![1.0], vec![1.0]],
            vec![Condition {
                terms: vec![],
                value: 0.0
            }]
        ));
    }

    #[test]
    fn degree_too_small() {
        assert_eq!(
            tau_solve(&linear_bvp(), OrthoBasis::chebyshev(), 1),
            Err(Error::DegreeTooSmall { n: 1, nu: 2 })
        );
    }

    #[test]
    fn singular_gamma_is_reported() {
        // y' = 0 with the condition y'(0)... not allowed; use y(0) weighted zero
        let op = PolyOperator::new(
            vec![vec![], vec![1.0]],
            vec![],
            vec![Condition {
                terms: vec![ConditionTerm {
                    point: 0.0,
                    order: 0,
                    weight: 0.0,
                }],
                value: 1.0,
            }],
        )
        .unwrap();
        let err = tau_solve(&op, OrthoBasis::chebyshev(), 4).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { size: 5, .. }));
    }

    #[test]
    fn cached_system_matches_fresh_solves() {
        let op = example1_operator();
        let sys = TauSystem::new(&op, OrthoBasis::chebyshev(), 40);
        for n in [1, 7, 40] {
            let a = sys.solve(n).unwrap().coeffs;
            let b = tau_solve(&op, OrthoBasis::chebyshev(), n).unwrap().coeffs;
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                assert_relative_eq!(x, y, max_relative = 1e-12);
            }
        }
    }
}
