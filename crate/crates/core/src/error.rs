use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported basis kind `{0}` (expected chebyshev or legendre)")]
    UnknownBasis(String),

    #[error("empty coefficient vector")]
    EmptySeries,

    #[error("constant polynomial has no roots")]
    ConstantPolynomial,

    #[error("eigenvalue iteration failed for a degree {0} comrade matrix")]
    RootFinding(usize),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("truncation degree n = {n} must be at least the operator order {nu}")]
    DegreeTooSmall { n: usize, nu: usize },

    #[error("ill-conditioned system of size {size}: condition estimate {estimate:e}")]
    IllConditioned { size: usize, estimate: f64 },

    #[error(
        "h-table {rows}x{cols} needs coefficients up to index {needed}, only {available} available \
         (max rows for {cols} cols: {max_rows}; max cols for {rows} rows: {max_cols})"
    )]
    TableTooLarge {
        rows: usize,
        cols: usize,
        needed: usize,
        available: usize,
        max_rows: usize,
        max_cols: usize,
    },

    #[error("type ({p},{q}) needs coefficients up to index {needed}, only up to {available} available")]
    InsufficientCoefficients {
        p: usize,
        q: usize,
        needed: usize,
        available: usize,
    },

    #[error("direct formula only covers q = 1 and q = 2, got q = {0}")]
    UnsupportedDirectOrder(usize),

    #[error("degenerate ({p},{q}) approximant: {reason}")]
    Degenerate { p: usize, q: usize, reason: String },

    #[error("denominator {value:e} vanishes at t = {t} (pole proximity)")]
    PoleProximity { t: f64, value: f64 },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
}
