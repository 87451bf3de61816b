use std::fs;
use std::path::Path;

use pivotal::expr::{parse, Expr};
use pivotal::{BooleanFunction, Evaluate, EXACT_CAP};
use serde::Serialize;

use crate::CliError;

/// A function named on the command line.
pub enum Input {
    Table(BooleanFunction),
    Expr { expr: Expr, n: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct Descriptor {
    pub origin: String,
    pub n: usize,
    /// `None` when the function was not tabulated.
    pub monotone: Option<bool>,
}

impl Input {
    pub fn load(
        table: Option<&Path>,
        expr: Option<&str>,
        n: Option<usize>,
    ) -> Result<Self, CliError> {
        match (table, expr) {
            (Some(path), None) => {
                if n.is_some() {
                    return Err(CliError::Usage("--n applies to --expr only".into()));
                }
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                let f = BooleanFunction::parse_table(&text)?;
                Ok(Input::Table(
                    f.with_origin(format!("table:{}", path.display())),
                ))
            }
            (None, Some(text)) => {
                let expr = parse(text)?;
                let arity = expr.arity();
                let n = n.unwrap_or(arity.max(1));
                if n < arity.max(1) {
                    return Err(CliError::Usage(format!(
                        "--n {n} is smaller than the largest variable index {arity}"
                    )));
                }
                Ok(Input::Expr { expr, n })
            }
            _ => Err(CliError::Usage(
                "exactly one of --table or --expr is required".into(),
            )),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Input::Table(f) => f.arity(),
            Input::Expr { n, .. } => *n,
        }
    }

    /// The truth table; fails beyond the exact-table cap.
    pub fn exact(&self) -> Result<BooleanFunction, CliError> {
        match self {
            Input::Table(f) => Ok(f.clone()),
            Input::Expr { expr, n } => {
                if *n > EXACT_CAP {
                    return Err(CliError::Usage(format!(
                        "arity {n} exceeds the exact-table cap of {EXACT_CAP}; use `estimate` or `analyze --estimate`"
                    )));
                }
                Ok(expr.compile(*n)?)
            }
        }
    }

    pub fn oracle(&self) -> Result<Box<dyn Evaluate + Sync>, CliError> {
        Ok(match self {
            Input::Table(f) => Box::new(f.clone()),
            Input::Expr { expr, n } => Box::new(expr.bind(*n)?),
        })
    }

    pub fn descriptor(&self, table: Option<&BooleanFunction>) -> Descriptor {
        let origin = match self {
            Input::Table(f) => f.origin(),
            Input::Expr { expr, .. } => format!("expr:{expr}"),
        };
        Descriptor {
            origin,
            n: self.arity(),
            monotone: table.map(BooleanFunction::is_monotone),
        }
    }
}
