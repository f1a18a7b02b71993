use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use taupade::{BasisKind, DEFAULT_TOL};
use taupade_cli::oracle::{example1_problem, example2_problem};
use taupade_cli::{parse_problem, run_pipeline, write_report, FilterSpec, Options, ProblemSpec, Stages};

#[derive(Parser)]
#[command(name = "taupade", version, about = "Tau solutions of polynomial-coefficient ODEs filtered by Frobenius-Padé approximants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tau solution, plus the error table when the problem is a built-in example
    Solve(FileArgs),
    /// Froissart table, selected filter and its coefficients
    Filter(FileArgs),
    /// Froissart table only
    Table(FileArgs),
    /// (p,1) and (p,2) pole sweep from the Tau coefficients
    Poles(FileArgs),
    /// Chebyshev example (t+1)y' - y/2 = 0, full pipeline
    Example1(Common),
    /// Legendre example (1+α²-2αt)²y'' - 15α²y = 0, full pipeline
    Example2 {
        #[arg(long, default_value_t = 0.9, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct FileArgs {
    /// Problem file (JSON)
    problem: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Tau degree
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    basis: Option<BasisKind>,
    #[arg(long)]
    pmax: Option<usize>,
    #[arg(long)]
    qmax: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Points of the evaluation grid for error curves
    #[arg(long, default_value_t = 201)]
    grid: usize,
}

impl Common {
    fn apply(&self, spec: &mut ProblemSpec, need_filter: bool) {
        if let Some(n) = self.n {
            spec.n = n;
        }
        if let Some(b) = self.basis {
            spec.basis = b;
        }
        let overridden = self.pmax.is_some() || self.qmax.is_some() || self.tol.is_some();
        if spec.filter.is_none() && (need_filter || overridden) {
            spec.filter = Some(FilterSpec {
                pmax: 25,
                qmax: 25,
                tol: DEFAULT_TOL,
                strategy: Default::default(),
            });
        }
        if let Some(f) = spec.filter.as_mut() {
            f.pmax = self.pmax.unwrap_or(f.pmax);
            f.qmax = self.qmax.unwrap_or(f.qmax);
            f.tol = self.tol.unwrap_or(f.tol);
        }
    }
}

fn load(path: &PathBuf) -> Result<ProblemSpec> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_problem(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    let (spec, common, stages) = match cli.command {
        Command::Solve(a) => (load(&a.problem)?, a.common, Stages::SOLVE),
        Command::Filter(a) => {
            let stages = Stages {
                error_table: false,
                froissart: true,
                filter: true,
                poles: false,
            };
            (load(&a.problem)?, a.common, stages)
        }
        Command::Table(a) => {
            let stages = Stages {
                error_table: false,
                froissart: true,
                filter: false,
                poles: false,
            };
            (load(&a.problem)?, a.common, stages)
        }
        Command::Poles(a) => {
            let stages = Stages {
                error_table: false,
                froissart: false,
                filter: false,
                poles: true,
            };
            (load(&a.problem)?, a.common, stages)
        }
        Command::Example1(c) => (example1_problem(150), c, Stages::ALL),
        Command::Example2 { alpha, common } => (example2_problem(alpha, 150)?, common, Stages::ALL),
    };
    let mut spec = spec;
    common.apply(&mut spec, stages.froissart || stages.filter);
    if common.grid == 0 {
        anyhow::bail!("--grid must be positive");
    }

    let options = Options {
        stages,
        grid: common.grid,
    };
    let report = run_pipeline(&spec, &options);
    if let Err(e) = &report.tau {
        eprintln!("tau solve failed: {e}");
    }
    if let Some(Err(e)) = &report.filter {
        eprintln!("filter failed: {e}");
    }
    if let Some((p, q)) = report.selected_filter {
        println!("selected filter: ({p},{q})");
    }
    for (stage, d) in &report.timings {
        println!("{stage:>12}: {:.3} ms", d.as_secs_f64() * 1e3);
    }
    for path in write_report(&report, &common.out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
