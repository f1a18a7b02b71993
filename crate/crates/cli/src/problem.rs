//! Problem files: JSON with keys `basis`, `n`, `nu`, `p`, `rhs`,
//! `conditions` and an optional `filter` block.

use serde::{Deserialize, Serialize};
use taupade::{BasisKind, Condition, FilterStrategy, OrthoBasis, PolyOperator, DEFAULT_TOL};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field `{path}`: {message}")]
    Semantic { path: String, message: String },
}

fn semantic(path: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        path: path.into(),
        message: message.into(),
    }
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSpec {
    pub pmax: usize,
    pub qmax: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub strategy: FilterStrategy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub basis: BasisKind,
    pub n: usize,
    pub nu: usize,
    /// Monomial coefficients of `p_i`, index = derivative order.
    pub p: Vec<Vec<f64>>,
    /// Basis coefficients of the right-hand side.
    #[serde(default)]
    pub rhs: Vec<f64>,
    pub conditions: Vec<Condition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterSpec>,
}

impl ProblemSpec {
    pub fn basis(&self) -> OrthoBasis {
        OrthoBasis::new(self.basis)
    }

    pub fn operator(&self) -> taupade::Result<PolyOperator> {
        PolyOperator::new(self.p.clone(), self.rhs.clone(), self.conditions.clone())
    }

    fn validate(&self) -> Result<(), ParseError> {
        if self.p.len() != self.nu + 1 {
            return Err(semantic(
                "p",
                format!("order {} needs {} coefficient lists, got {}", self.nu, self.nu + 1, self.p.len()),
            ));
        }
        if self.p[self.nu].iter().all(|&c| c == 0.0) {
            return Err(semantic(format!("p[{}]", self.nu), "leading coefficient is identically zero"));
        }
        if self.conditions.len() != self.nu {
            return Err(semantic(
                "conditions",
                format!("order {} needs {} conditions, got {}", self.nu, self.nu, self.conditions.len()),
            ));
        }
        if self.n < self.nu {
            return Err(semantic("n", format!("degree must be at least nu = {}", self.nu)));
        }
        for (i, p) in self.p.iter().enumerate() {
            if let Some(j) = p.iter().position(|c| !c.is_finite()) {
                return Err(semantic(format!("p[{i}][{j}]"), "not finite"));
            }
        }
        if let Some(j) = self.rhs.iter().position(|c| !c.is_finite()) {
            return Err(semantic(format!("rhs[{j}]"), "not finite"));
        }
        for (k, cond) in self.conditions.iter().enumerate() {
            if cond.terms.is_empty() {
                return Err(semantic(format!("conditions[{k}].terms"), "empty"));
            }
            if !cond.value.is_finite() {
                return Err(semantic(format!("conditions[{k}].value"), "not finite"));
            }
            for (j, term) in cond.terms.iter().enumerate() {
                let at = |field: &str| format!("conditions[{k}].terms[{j}].{field}");
                if !(-1.0..=1.0).contains(&term.point) {
                    return Err(semantic(at("point"), "must lie in [-1, 1]"));
                }
                if term.order >= self.nu {
                    return Err(semantic(at("order"), format!("must be below nu = {}", self.nu)));
                }
                if !term.weight.is_finite() {
                    return Err(semantic(at("weight"), "not finite"));
                }
            }
        }
        if let Some(f) = &self.filter {
            if f.pmax == 0 {
                return Err(semantic("filter.pmax", "must be positive"));
            }
            if f.qmax == 0 {
                return Err(semantic("filter.qmax", "must be positive"));
            }
            if !(f.tol > 0.0 && f.tol.is_finite()) {
                return Err(semantic("filter.tol", "must be positive and finite"));
            }
        }
        Ok(())
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &[u8]) -> Result<ProblemSpec, ParseError> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let before = &text[..e.valid_up_to()];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        ParseError::Syntax {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: ProblemSpec = match serde_path_to_error::deserialize(&mut de) {
        Ok(spec) => spec,
        Err(err) => {
            let path = err.path().to_string();
            let inner = err.into_inner();
            return Err(if inner.is_data() {
                semantic(path, strip_position(&inner))
            } else {
                ParseError::Syntax {
                    line: inner.line(),
                    column: inner.column(),
                    message: strip_position(&inner),
                }
            });
        }
    };
    de.end().map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e),
    })?;
    spec.validate()?;
    Ok(spec)
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

/// Pretty-printed JSON; floats use the shortest round-trip representation.
pub fn emit_problem(spec: &ProblemSpec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("problem specs always serialize");
    s.push('\n');
    s
}
