//! Pivotal sets, influences and biased-measure inequalities for Boolean
//! functions.
//!
//! Functions live on `{0,1}^n` under the product measure where each
//! coordinate is 1 with probability `p`. Exact routines enumerate all `2^n`
//! configurations (`n <= EXACT_CAP`); [`montecarlo`] handles wider oracles.
//!
//! Coordinates are 1-based in the public API and coordinate `i` is bit
//! `i - 1` of a configuration index.

pub mod check;
pub mod config;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod family;
pub mod function;
pub mod harness;
pub mod measure;
pub mod montecarlo;
pub mod pivotal;
pub mod tail;

pub use check::{CheckResult, Relation};
pub use config::Configuration;
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use family::Family;
pub use function::{
    discrete_derivative, pivotal_set, BooleanFunction, Evaluate, FunctionOracle, EXACT_CAP,
};
pub use measure::Bias;
