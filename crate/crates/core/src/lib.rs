//! Spectral Tau solutions of linear ODEs with polynomial coefficients, filtered
//! through Frobenius-Padé rational approximants.
//!
//! The crate is organised bottom-up:
//!
//! - [`orthopoly`]: Chebyshev/Legendre recurrence data, Clenshaw evaluation,
//!   operational differentiation and shift matrices, comrade-matrix roots.
//! - [`taumethod`]: the operational Tau solver, its residual and the
//!   a-posteriori error estimator.
//! - [`fpade`]: the h-table, general and closed-form Frobenius-Padé
//!   approximants, and pole formulas for the `(p,1)` and `(p,2)` sequences.
//! - [`froissart`]: zero/pole extraction, doublet counting, the Froissart
//!   table and filter selection.

pub mod error;
pub mod fpade;
pub mod froissart;
mod linalg;
pub mod orthopoly;
pub mod taumethod;

pub use error::{Error, Result};
pub use fpade::{
    direct_pade, direct_poles, frobenius_pade, h_table, HTable, RationalApproximant,
};
pub use froissart::{
    count_doublets, froissart_table, select_filter, table_cell, zeros_poles, Cell,
    FilterStrategy, FroissartTable, ZeroPoleSet, DEFAULT_TOL,
};
pub use orthopoly::{make_basis, BasisKind, CoeffSeries, Evaluation, OrthoBasis};
pub use taumethod::{
    build_pi, condition_row, error_estimate, residual, tau_solve, Condition, ConditionTerm,
    PolyOperator, TauSolution, TauSystem,
};
