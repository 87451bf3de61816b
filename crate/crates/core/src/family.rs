//! Canonical function families. Each family evaluates directly on
//! configurations of any arity and can be tabulated when `n <= EXACT_CAP`.

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, Evaluate, FunctionOracle};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `f(omega) = omega(i)`.
    Dictator {
        n: usize,
        i: usize,
    },
    /// Strict majority of an odd number of votes.
    Majority {
        n: usize,
    },
    Parity {
        n: usize,
    },
    And {
        n: usize,
    },
    Or {
        n: usize,
    },
    /// OR of `count` disjoint ANDs, each over `width` consecutive coordinates.
    Tribes {
        width: usize,
        count: usize,
    },
    /// `1` iff `sum_i weights[i] * omega(i+1) >= theta`.
    Threshold {
        weights: Vec<f64>,
        theta: f64,
    },
    Constant {
        n: usize,
        value: bool,
    },
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidParameter(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

impl Family {
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        positive("n", n)?;
        if i == 0 || i > n {
            return Err(Error::CoordinateOutOfRange { i, n });
        }
        Ok(Family::Dictator { n, i })
    }

    pub fn majority(n: usize) -> Result<Self> {
        positive("n", n)?;
        if n.is_multiple_of(2) {
            return Err(Error::EvenMajority(n));
        }
        Ok(Family::Majority { n })
    }

    pub fn parity(n: usize) -> Result<Self> {
        positive("n", n)?;
        Ok(Family::Parity { n })
    }

    pub fn and(n: usize) -> Result<Self> {
        positive("n", n)?;
        Ok(Family::And { n })
    }

    pub fn or(n: usize) -> Result<Self> {
        positive("n", n)?;
        Ok(Family::Or { n })
    }

    pub fn tribes(width: usize, count: usize) -> Result<Self> {
        positive("tribe width", width)?;
        positive("tribe count", count)?;
        Ok(Family::Tribes { width, count })
    }

    pub fn threshold(weights: Vec<f64>, theta: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter(
                "threshold needs at least one weight".into(),
            ));
        }
        if !theta.is_finite() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "threshold parameters must be finite".into(),
            ));
        }
        Ok(Family::Threshold { weights, theta })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        positive("n", n)?;
        Ok(Family::Constant { n, value })
    }

    pub fn name(&self) -> String {
        match self {
            Family::Dictator { n, i } => format!("dictator({n},{i})"),
            Family::Majority { n } => format!("majority({n})"),
            Family::Parity { n } => format!("parity({n})"),
            Family::And { n } => format!("and({n})"),
            Family::Or { n } => format!("or({n})"),
            Family::Tribes { width, count } => format!("tribes({width},{count})"),
            Family::Threshold { weights, theta } => format!("threshold({weights:?},{theta})"),
            Family::Constant { n, value } => format!("constant({n},{})", u8::from(*value)),
        }
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        BooleanFunction::tabulate(self)
    }

    pub fn to_oracle(&self) -> FunctionOracle {
        FunctionOracle::from_evaluator(self.clone())
    }
}

fn block_all_ones(omega: &Configuration, start: usize, len: usize) -> bool {
    (start..start + len).all(|b| omega.bit(b))
}

impl Evaluate for Family {
    fn arity(&self) -> usize {
        match self {
            Family::Dictator { n, .. }
            | Family::Majority { n }
            | Family::Parity { n }
            | Family::And { n }
            | Family::Or { n }
            | Family::Constant { n, .. } => *n,
            Family::Tribes { width, count } => width * count,
            Family::Threshold { weights, .. } => weights.len(),
        }
    }

    fn eval(&self, omega: &Configuration) -> bool {
        match self {
            Family::Dictator { i, .. } => omega.bit(i - 1),
            Family::Majority { n } => 2 * omega.weight() > *n,
            Family::Parity { .. } => omega.weight() % 2 == 1,
            Family::And { n } => omega.weight() == *n,
            Family::Or { .. } => omega.weight() > 0,
            Family::Tribes { width, count } => {
                (0..*count).any(|t| block_all_ones(omega, t * width, *width))
            }
            Family::Threshold { weights, theta } => {
                let total: f64 = weights
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| omega.bit(b))
                    .map(|(_, w)| w)
                    .sum();
                total >= *theta
            }
            Family::Constant { value, .. } => *value,
        }
    }

    fn origin(&self) -> String {
        self.name()
    }
}
