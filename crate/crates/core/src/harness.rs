//! Inequality and identity checks over exact truth tables.
//!
//! Every check returns a [`CheckResult`] with raw left and right sides.
//! Bounds that may exceed 1 are compared raw; the capped value is only
//! mentioned in the notes.

use crate::check::{CheckResult, DERIVATIVE_TOL};
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::measure::{self, Bias};
use crate::pivotal::{self, conditional_stats, second_order, total_influence};

const NON_MONOTONE: &str = "requires a non-decreasing function";

fn capped_note(bound: f64) -> String {
    if bound > 1.0 {
        format!("bound {bound:.6} is vacuous; min(1, bound) = 1")
    } else {
        String::new()
    }
}

fn monotone_only(check: CheckResult, f: &BooleanFunction) -> CheckResult {
    if f.is_monotone() {
        check
    } else {
        check.not_applicable_because(NON_MONOTONE)
    }
}

/// `E|P(f)| <= sqrt(n E(f) / (p (1-p)))`.
pub fn check_theorem1(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let lhs = total_influence(f, p)?.total;
    let rhs = (f.arity() as f64 * measure::mean(f, p)? / bias.variance()).sqrt();
    Ok(monotone_only(
        CheckResult::at_most("theorem1", p, lhs, rhs),
        f,
    ))
}

/// `sum_i Inf_i^2 <= E(f) / (p (1-p))`.
pub fn check_bessel(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let lhs = total_influence(f, p)?.sum_of_squares();
    let rhs = measure::mean(f, p)? / bias.variance();
    Ok(monotone_only(
        CheckResult::at_most("bessel", p, lhs, rhs),
        f,
    ))
}

/// `E|P(f)| <= sqrt(n sum_i Inf_i^2)`, the Cauchy-Schwarz step that turns
/// the Bessel bound back into the first bound.
pub fn check_bessel_chain(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    Bias::interior(p)?;
    let profile = total_influence(f, p)?;
    let rhs = (f.arity() as f64 * profile.sum_of_squares()).sqrt();
    Ok(CheckResult::at_most("bessel.chain", p, profile.total, rhs))
}

/// `d/dp E_p(f) = E|P(f)|`, reported as two one-sided checks with relative
/// tolerance `1e-9`.
pub fn check_margulis_russo(f: &BooleanFunction, p: f64) -> Result<[CheckResult; 2]> {
    let derivative = measure::mean_derivative(f, p)?;
    let total = total_influence(f, p)?.total;
    Ok([
        monotone_only(
            CheckResult::at_most_within(
                "margulis_russo.upper",
                p,
                derivative,
                total,
                DERIVATIVE_TOL,
            ),
            f,
        ),
        monotone_only(
            CheckResult::at_most_within(
                "margulis_russo.lower",
                p,
                total,
                derivative,
                DERIVATIVE_TOL,
            ),
            f,
        ),
    ])
}

fn bth_bound(n: usize, bias: Bias, cond_sn: f64) -> f64 {
    let t = bias.variance() * cond_sn;
    2.0 * (-(t * t) / (2.0 * n as f64)).exp()
}

fn rth_bound(bias: Bias, cond_xi: &[f64]) -> f64 {
    let exponent: f64 = cond_xi
        .iter()
        .map(|c| {
            let t = bias.variance() * c;
            t * t
        })
        .sum();
    2.0 * (-0.5 * exponent).exp()
}

/// `P(f=1) <= 2 exp(-(p(1-p) E(S_n | f=1))^2 / (2n))`, any `f`.
pub fn check_bth(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let c = conditional_stats(f, p)?;
    let rhs = bth_bound(f.arity(), bias, c.cond_sn);
    Ok(CheckResult::at_most("bth", p, c.prob_one, rhs).with_note(capped_note(rhs)))
}

/// `P(f=1) <= 2 exp(-((1-p) E(|P(f)| | f=1))^2 / (2n))`, monotone `f`.
pub fn check_imme(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let c = conditional_stats(f, p)?;
    let t = bias.q() * c.cond_pivotal;
    let rhs = 2.0 * (-(t * t) / (2.0 * f.arity() as f64)).exp();
    let check = CheckResult::at_most("imme", p, c.prob_one, rhs).with_note(capped_note(rhs));
    Ok(monotone_only(check, f))
}

/// `P(f=1) <= 2 exp(-1/2 sum_i (p(1-p) E(X_i f | f=1))^2)`, any `f`.
pub fn check_rth(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let c = conditional_stats(f, p)?;
    let rhs = rth_bound(bias, &c.cond_xi);
    Ok(CheckResult::at_most("rth", p, c.prob_one, rhs).with_note(capped_note(rhs)))
}

/// The right side of [`check_rth`] never exceeds that of [`check_bth`].
pub fn check_rth_vs_bth(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let c = conditional_stats(f, p)?;
    Ok(CheckResult::at_most(
        "rth_vs_bth",
        p,
        rth_bound(bias, &c.cond_xi),
        bth_bound(f.arity(), bias, c.cond_sn),
    ))
}

/// `P(f=1) <= 2 exp(-1/2 sum_i ((1-p) P(i in P(f) | f=1))^2)`, monotone `f`.
pub fn check_crth(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let c = conditional_stats(f, p)?;
    let exponent: f64 = c
        .cond_pivotal_coord
        .iter()
        .map(|x| {
            let t = bias.q() * x;
            t * t
        })
        .sum();
    let rhs = 2.0 * (-0.5 * exponent).exp();
    let check = CheckResult::at_most("crth", p, c.prob_one, rhs).with_note(capped_note(rhs));
    Ok(monotone_only(check, f))
}

/// `sum_i E(X_i f)^2 <= 2 P(f=1)^2 ln(2 / P(f=1)) / (p^2 (1-p)^2)`, the
/// explicit-constant form of the first correlation inequality.
///
/// When `P(f=1)` is 0 or 1 the check passes trivially and is marked
/// inapplicable.
pub fn check_talag_explicit(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let prob_one = measure::mean(f, p)?;
    let lhs: f64 = (1..=f.arity())
        .map(|i| pivotal::correlation_xi(f, i, p).map(|c| c * c))
        .sum::<Result<f64>>()?;
    if f.is_constant() {
        let mut c = CheckResult::at_most("talag_explicit", p, lhs, 0.0);
        c.holds = true;
        return Ok(c.not_applicable_because("P(f=1) is 0 or 1; statement is trivial"));
    }
    let v2 = bias.variance() * bias.variance();
    let rhs = 2.0 * prob_one * prob_one * (2.0 / prob_one).ln() / v2;
    let mut check = CheckResult::at_most("talag_explicit", p, lhs, rhs);
    if p == 0.5 {
        let normalized = prob_one * prob_one * (std::f64::consts::E / prob_one).ln();
        check = check.with_note(format!(
            "implied K at p=1/2: {:.6} against P^2 ln(e/P); 32 against P^2 ln(2/P)",
            rhs / normalized
        ));
    }
    Ok(check)
}

/// `x^2 ln(2/x)`, extended by 0 at `x = 0`.
fn entropy_weight(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x * (2.0 / x).ln()
    }
}

/// `sum_{i != k} E(X_i X_k f)^2 <= c(p) sum_k Inf_k^2 ln(2 / Inf_k)` with
/// `c(p) = 2 / (p^2 (1-p)^2)`; monotone `f`.
pub fn check_stagi(f: &BooleanFunction, p: f64) -> Result<CheckResult> {
    let bias = Bias::interior(p)?;
    let lhs = second_order(f, p)?.off_diagonal_sum_of_squares();
    let profile = total_influence(f, p)?;
    let c = 2.0 / (bias.variance() * bias.variance());
    let rhs = c * profile
        .per_coord
        .iter()
        .map(|&x| entropy_weight(x))
        .sum::<f64>();
    Ok(monotone_only(CheckResult::at_most("stagi", p, lhs, rhs), f))
}

/// One grid point of [`etalag_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct EtalagRow {
    pub k: f64,
    pub rhs: f64,
    pub passes: bool,
}

/// Report-only scan of the second-order inequality at `p = 1/2` over a grid
/// of candidate constants `K`: does `lhs <= K W ln(K / W)` hold, where
/// `W = sum_k Inf_k^2`?
#[derive(Debug, Clone, PartialEq)]
pub struct EtalagScan {
    pub lhs: f64,
    pub w: f64,
    pub rows: Vec<EtalagRow>,
    /// Smallest grid `K` at which the inequality holds.
    pub minimal_k: Option<f64>,
    pub notes: String,
}

/// Powers of two from 1 to 1024.
pub fn default_k_grid() -> Vec<f64> {
    (0..=10).map(|e| f64::from(1u32 << e)).collect()
}

pub fn etalag_scan(f: &BooleanFunction, k_grid: &[f64]) -> Result<EtalagScan> {
    if !f.is_monotone() {
        return Err(Error::InvalidParameter(
            "the second-order scan is restricted to non-decreasing functions".into(),
        ));
    }
    let p = 0.5;
    let lhs = second_order(f, p)?.off_diagonal_sum_of_squares();
    let w = total_influence(f, p)?.sum_of_squares();
    if w == 0.0 {
        return Ok(EtalagScan {
            lhs,
            w,
            rows: Vec::new(),
            minimal_k: None,
            notes: "sum of squared influences is 0; scan skipped".into(),
        });
    }
    let mut grid = k_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let rows: Vec<EtalagRow> = grid
        .into_iter()
        .map(|k| {
            let rhs = k * w * (k / w).ln();
            EtalagRow {
                k,
                rhs,
                passes: lhs <= rhs,
            }
        })
        .collect();
    let minimal_k = rows.iter().find(|r| r.passes).map(|r| r.k);
    Ok(EtalagScan {
        lhs,
        w,
        rows,
        minimal_k,
        notes: String::new(),
    })
}

/// The default bias grid `{0.1, 0.2, ..., 0.9}`.
pub fn default_p_grid() -> Vec<f64> {
    (1..=9).map(|k| f64::from(k) / 10.0).collect()
}

fn or_inapplicable(name: &str, p: f64, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::inapplicable(name, p, e.to_string()))
}

/// Every check at every bias of the grid. Failing preconditions (null
/// conditioning event, endpoint bias, non-monotone input) show up as
/// inapplicable results, never as errors.
pub fn run_suite(f: &BooleanFunction, p_grid: &[f64]) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for &p in p_grid {
        out.push(or_inapplicable("theorem1", p, check_theorem1(f, p)));
        out.push(or_inapplicable("bessel", p, check_bessel(f, p)));
        out.push(or_inapplicable("bessel.chain", p, check_bessel_chain(f, p)));
        match check_margulis_russo(f, p) {
            Ok(pair) => out.extend(pair),
            Err(e) => {
                out.push(CheckResult::inapplicable(
                    "margulis_russo.upper",
                    p,
                    e.to_string(),
                ));
                out.push(CheckResult::inapplicable(
                    "margulis_russo.lower",
                    p,
                    e.to_string(),
                ));
            }
        }
        out.push(or_inapplicable("bth", p, check_bth(f, p)));
        out.push(or_inapplicable("rth", p, check_rth(f, p)));
        out.push(or_inapplicable("rth_vs_bth", p, check_rth_vs_bth(f, p)));
        out.push(or_inapplicable("imme", p, check_imme(f, p)));
        out.push(or_inapplicable("crth", p, check_crth(f, p)));
        out.push(or_inapplicable(
            "talag_explicit",
            p,
            check_talag_explicit(f, p),
        ));
        out.push(or_inapplicable("stagi", p, check_stagi(f, p)));
    }
    out
}
