//! Tail bounds for `S_n`: the Hoeffding bound, exact binomial tails, and
//! the central-binomial pivotal probability of majority.

use crate::check::{CheckResult, IDENTITY_TOL};
use crate::error::{Error, Result};
use crate::measure::Bias;

/// Largest `n` accepted by [`exact_tail`].
pub const MAX_TAIL_N: u64 = 1_000_000;

/// Which exponent constant to use in the Hoeffding bound for `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoeffdingVariant {
    /// `2 exp(-2 p^2 (1-p)^2 u^2 / n)`.
    Stated,
    /// `2 exp(-p^2 (1-p)^2 u^2 / (2n))`, the constant produced by the
    /// symmetrization argument with `cosh(x) <= exp(x^2/2)`.
    Proved,
}

/// Bound on `P(|S_n| >= u)`; may exceed 1.
pub fn hoeffding_bound(n: u64, p: f64, u: f64, variant: HoeffdingVariant) -> Result<f64> {
    let bias = Bias::interior(p)?;
    if !u.is_finite() || u <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "u must be positive, got {u}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let v2 = bias.variance() * bias.variance();
    let exponent = match variant {
        HoeffdingVariant::Stated => -2.0 * v2 * u * u / n as f64,
        HoeffdingVariant::Proved => -v2 * u * u / (2.0 * n as f64),
    };
    Ok(2.0 * exponent.exp())
}

/// `ln C(n, k)` through the log-gamma function.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    assert!(k <= n, "k = {k} exceeds n = {n}");
    let lg = |x: u64| libm::lgamma(x as f64 + 1.0);
    lg(n) - lg(k) - lg(n - k)
}

/// An exact tail probability next to its Hoeffding bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPoint {
    pub n: u64,
    pub p: f64,
    pub u: f64,
    /// `P(|S_n| >= u)`.
    pub exact: f64,
    /// [`HoeffdingVariant::Stated`] bound.
    pub bound: f64,
}

/// `P(|S_n| >= u)` with `S_n = (K - np)/(p(1-p))` and `K ~ Bin(n, p)`, summing
/// `C(n,k) p^k (1-p)^(n-k)` in the log domain over `|k - np| >= u p (1-p)`.
///
/// Counts whose distance to `np` equals the threshold up to a relative
/// `1e-12` are included, so rounding can only enlarge `exact`.
pub fn exact_tail(n: u64, p: f64, u: f64) -> Result<TailPoint> {
    let bias = Bias::interior(p)?;
    if n == 0 || n > MAX_TAIL_N {
        return Err(Error::InvalidParameter(format!(
            "n must be in 1..={MAX_TAIL_N}, got {n}"
        )));
    }
    let bound = hoeffding_bound(n, p, u, HoeffdingVariant::Stated)?;
    let threshold = u * bias.variance();
    let cutoff = threshold - 1e-12 * threshold.max(1.0);
    let center = n as f64 * bias.p();
    let (ln_p, ln_q) = (bias.p().ln(), bias.q().ln());
    let exact: f64 = (0..=n)
        .filter(|&k| (k as f64 - center).abs() >= cutoff)
        .map(|k| (ln_choose(n, k) + k as f64 * ln_p + (n - k) as f64 * ln_q).exp())
        .sum();
    Ok(TailPoint {
        n,
        p,
        u,
        exact: exact.min(1.0),
        bound,
    })
}

/// Pivotal probability of one voter in `majority(n)` at `p = 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorityPivotal {
    pub n: u64,
    /// `C(n-1, (n-1)/2) / 2^(n-1)`.
    pub exact: f64,
    /// `1 / sqrt(n p (1-p))` at `p = 1/2`.
    pub upper_bound: f64,
    /// `sqrt(2 / (pi n))`.
    pub asymptotic: f64,
}

impl MajorityPivotal {
    /// The bound check, and the 2% agreement with the asymptotic for `n >= 101`.
    pub fn checks(&self) -> Vec<CheckResult> {
        let bound = CheckResult::at_most("majority.upper_bound", 0.5, self.exact, self.upper_bound);
        let ratio = (self.exact / self.asymptotic - 1.0).abs();
        let mut asym = CheckResult::at_most_within(
            "majority.asymptotic_ratio",
            0.5,
            ratio,
            0.02,
            IDENTITY_TOL,
        )
        .with_note(format!(
            "exact {:.6}, asymptotic {:.6}",
            self.exact, self.asymptotic
        ));
        if self.n < 101 {
            asym = asym.not_applicable_because("asymptotic agreement asserted only for n >= 101");
        }
        vec![bound, asym]
    }
}

pub fn check_majority_asymptotic(n: u64) -> Result<MajorityPivotal> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenMajority(n as usize));
    }
    if !(3..=100_000).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "majority size must be in 3..=100000, got {n}"
        )));
    }
    let m = n - 1;
    let exact = (ln_choose(m, m / 2) - m as f64 * std::f64::consts::LN_2).exp();
    Ok(MajorityPivotal {
        n,
        exact,
        upper_bound: 1.0 / (n as f64 * 0.25).sqrt(),
        asymptotic: (2.0 / (std::f64::consts::PI * n as f64)).sqrt(),
    })
}
