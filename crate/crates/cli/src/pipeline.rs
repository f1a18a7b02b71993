//! solve → Froissart table → filter selection → filter → pole sweep.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use taupade::{
    direct_poles, froissart_table, frobenius_pade, select_filter, CoeffSeries, FroissartTable,
    RationalApproximant, TauSystem,
};

use crate::oracle::{detect_oracle, BuiltinOracle};
use crate::problem::ProblemSpec;

/// Which optional stages to run after the Tau solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stages {
    pub error_table: bool,
    pub froissart: bool,
    pub filter: bool,
    pub poles: bool,
}

impl Stages {
    pub const ALL: Stages = Stages {
        error_table: true,
        froissart: true,
        filter: true,
        poles: true,
    };
    pub const SOLVE: Stages = Stages {
        error_table: true,
        froissart: false,
        filter: false,
        poles: false,
    };
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub stages: Stages,
    /// Points of the uniform evaluation grid on `[-1, 1]`.
    pub grid: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            stages: Stages::ALL,
            grid: 201,
        }
    }
}

pub type StageResult<T> = Result<T, String>;

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub condition_estimate: StageResult<f64>,
    /// Present only with an oracle.
    pub error_norm: Option<StageResult<f64>>,
    /// `‖e_n‖ / ‖e_{n-1}‖`, present only with an oracle.
    pub ratio: Option<StageResult<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleRow {
    pub p: usize,
    pub q: usize,
    pub poles: StageResult<Vec<Complex64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridRow {
    pub t: f64,
    pub exact: f64,
    pub tau_error: StageResult<f64>,
    /// Present only when a filter was built.
    pub filter_error: Option<StageResult<f64>>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub spec: ProblemSpec,
    pub oracle: Option<BuiltinOracle>,
    pub tau: StageResult<CoeffSeries>,
    pub error_table: Vec<ErrorRow>,
    pub froissart: Option<FroissartTable>,
    pub selected_filter: Option<(usize, usize)>,
    pub filter: Option<StageResult<RationalApproximant>>,
    pub poles: Vec<PoleRow>,
    /// Pointwise errors against the oracle solution.
    pub grid: Vec<GridRow>,
    pub timings: Vec<(&'static str, Duration)>,
}

fn timed<T>(timings: &mut Vec<(&'static str, Duration)>, stage: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((stage, start.elapsed()));
    out
}

pub fn run_pipeline(spec: &ProblemSpec, options: &Options) -> RunReport {
    let mut timings = Vec::new();
    let oracle = detect_oracle(spec);
    let basis = spec.basis();
    let mut report = RunReport {
        spec: spec.clone(),
        oracle: oracle.clone(),
        tau: Err("not run".into()),
        error_table: Vec::new(),
        froissart: None,
        selected_filter: None,
        filter: None,
        poles: Vec::new(),
        grid: Vec::new(),
        timings: Vec::new(),
    };
    let problem = match spec.operator() {
        Ok(p) => p,
        Err(e) => {
            report.tau = Err(e.to_string());
            return report;
        }
    };

    let system = timed(&mut timings, "assemble", || TauSystem::new(&problem, basis, spec.n));
    let tau = timed(&mut timings, "solve", || system.solve(spec.n));
    report.tau = tau.as_ref().map(|s| s.coeffs.clone()).map_err(|e| e.to_string());

    report.error_table = timed(&mut timings, "error_table", || {
        if options.stages.error_table && oracle.is_some() {
            error_table(&system, spec.nu, spec.n, oracle.as_ref())
        } else {
            let row = ErrorRow {
                n: spec.n,
                condition_estimate: tau
                    .as_ref()
                    .map(|s| s.system_condition_estimate)
                    .map_err(|e| e.to_string()),
                error_norm: None,
                ratio: None,
            };
            vec![row]
        }
    });

    let Ok(coeffs) = report.tau.clone() else {
        report.timings = timings;
        return report;
    };

    if let Some(f) = spec.filter.as_ref().filter(|_| options.stages.froissart || options.stages.filter) {
        let table = timed(&mut timings, "froissart", || {
            froissart_table(basis, &coeffs, f.pmax, f.qmax, f.tol)
        });
        report.selected_filter = select_filter(&table, f.strategy);
        report.froissart = Some(table);
        if options.stages.filter {
            report.filter = Some(match report.selected_filter {
                Some((p, q)) => timed(&mut timings, "filter", || {
                    frobenius_pade(basis, &coeffs, p, q).map_err(|e| e.to_string())
                }),
                None => Err("no clean diagonal filter".into()),
            });
        }
    }

    if options.stages.poles {
        report.poles = timed(&mut timings, "poles", || pole_sweep(&coeffs));
    }

    if let Some(o) = &oracle {
        report.grid = timed(&mut timings, "grid", || {
            error_grid(o, &coeffs, report.filter.as_ref(), options.grid)
        });
    }
    report.timings = timings;
    report
}

fn error_table(system: &TauSystem, nu: usize, n: usize, oracle: Option<&BuiltinOracle>) -> Vec<ErrorRow> {
    let first = nu.max(1);
    let mut prev: Option<StageResult<f64>> = None;
    let mut rows = Vec::new();
    for m in first..=n {
        let sol = system.solve(m).map_err(|e| e.to_string());
        let norm = oracle.map(|o| sol.as_ref().map(|s| o.error_norm(s.coeffs.coeffs())).map_err(Clone::clone));
        let ratio = match (&prev, &norm) {
            (Some(Ok(a)), Some(Ok(b))) => Some(Ok(b / a)),
            (Some(_), Some(_)) => Some(Err("missing norm".into())),
            _ => None,
        };
        if m > first {
            rows.push(ErrorRow {
                n: m,
                condition_estimate: sol
                    .as_ref()
                    .map(|s| s.system_condition_estimate)
                    .map_err(Clone::clone),
                error_norm: norm.clone(),
                ratio,
            });
        }
        prev = norm;
    }
    rows
}

/// `(p,1)` poles for `p = 1..n-2` and `(p,2)` poles for `p = 1..n-4`,
/// straight from the coefficients.
pub fn pole_sweep(coeffs: &CoeffSeries) -> Vec<PoleRow> {
    let n = coeffs.degree();
    let kind = coeffs.basis().kind();
    let c = coeffs.coeffs();
    let mut rows = Vec::new();
    for q in [1, 2] {
        for p in 1..=n.saturating_sub(2 * q) {
            rows.push(PoleRow {
                p,
                q,
                poles: direct_poles(kind, c, p, q).map_err(|e| e.to_string()),
            });
        }
    }
    rows
}

fn error_grid(
    oracle: &BuiltinOracle,
    coeffs: &CoeffSeries,
    filter: Option<&StageResult<RationalApproximant>>,
    points: usize,
) -> Vec<GridRow> {
    let filter = filter.and_then(|f| f.as_ref().ok());
    (0..points)
        .map(|i| {
            let t = if points == 1 {
                0.0
            } else {
                -1.0 + 2.0 * i as f64 / (points - 1) as f64
            };
            let exact = oracle.y(t);
            GridRow {
                t,
                exact,
                tau_error: coeffs.eval(t).map(|v| (exact - v).abs()).map_err(|e| e.to_string()),
                filter_error: filter.map(|r| r.eval(t).map(|v| (exact - v).abs()).map_err(|e| e.to_string())),
            }
        })
        .collect()
}
