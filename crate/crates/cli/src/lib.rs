//! Problem files, built-in examples with closed-form oracles, the
//! solve/filter/table/poles pipeline and its CSV reports.

pub mod oracle;
pub mod pipeline;
pub mod problem;
pub mod report;

pub use oracle::{detect_oracle, example1_oracle, example2_oracle, BuiltinOracle};
pub use pipeline::{run_pipeline, Options, RunReport, Stages};
pub use problem::{emit_problem, parse_problem, FilterSpec, ParseError, ProblemSpec};
pub use report::write_report;
