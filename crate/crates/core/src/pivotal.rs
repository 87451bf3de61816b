//! Influences, pivotal-set statistics and correlations with the characters.
//!
//! Two quantities are kept apart on purpose: [`influence`] is the probability
//! that a coordinate is pivotal, `E|delta_i f|`, valid for any `f`;
//! [`correlation_xi`] is the signed `E(X_i f)`. They coincide only for
//! monotone functions.

use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::measure::{indicator, s_n_from_weight, sum_weighted, Bias, LayerWeights};

fn check_coordinate(f: &BooleanFunction, i: usize) -> Result<()> {
    if i == 0 || i > f.arity() {
        Err(Error::CoordinateOutOfRange { i, n: f.arity() })
    } else {
        Ok(())
    }
}

#[inline]
fn is_pivotal(f: &BooleanFunction, bit: u64, idx: u64) -> bool {
    f.value(idx | bit) != f.value(idx & !bit)
}

/// Number of pivotal coordinates at an index.
#[inline]
pub(crate) fn pivotal_count(f: &BooleanFunction, idx: u64) -> u32 {
    (0..f.arity())
        .filter(|&b| is_pivotal(f, 1 << b, idx))
        .count() as u32
}

/// `Inf_i(p) = P(i is pivotal) = sum_omega |delta_i f(omega)| P(omega)`.
pub fn influence(f: &BooleanFunction, i: usize, p: f64) -> Result<f64> {
    check_coordinate(f, i)?;
    let bias = Bias::new(p)?;
    let bit = 1u64 << (i - 1);
    Ok(sum_weighted(f.arity(), bias, |idx| {
        indicator(is_pivotal(f, bit, idx))
    }))
}

/// `E(X_i f)`, the signed correlation with the `i`-th character.
pub fn correlation_xi(f: &BooleanFunction, i: usize, p: f64) -> Result<f64> {
    check_coordinate(f, i)?;
    let bias = Bias::interior(p)?;
    Ok(correlations(f, bias)[i - 1])
}

/// `E(X_i f)` for every coordinate in one pass.
fn correlations(f: &BooleanFunction, bias: Bias) -> Vec<f64> {
    let n = f.arity();
    let weights = LayerWeights::new(n, bias);
    let (up, down) = (1.0 / bias.p(), -1.0 / bias.q());
    let mut acc = vec![0.0; n];
    for idx in (0..f.len()).filter(|&idx| f.value(idx)) {
        let w = weights.at_index(idx);
        for (b, slot) in acc.iter_mut().enumerate() {
            *slot += if idx >> b & 1 == 1 { up * w } else { down * w };
        }
    }
    acc
}

/// Per-coordinate influences and their sum `E|P(f)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceProfile {
    pub p: f64,
    pub per_coord: Vec<f64>,
    pub total: f64,
    pub monotone_input: bool,
}

impl InfluenceProfile {
    pub fn sum_of_squares(&self) -> f64 {
        self.per_coord.iter().map(|x| x * x).sum()
    }
}

pub fn total_influence(f: &BooleanFunction, p: f64) -> Result<InfluenceProfile> {
    let bias = Bias::new(p)?;
    let n = f.arity();
    let weights = LayerWeights::new(n, bias);
    let mut per_coord = vec![0.0; n];
    for idx in 0..f.len() {
        let w = weights.at_index(idx);
        for (b, slot) in per_coord.iter_mut().enumerate() {
            if is_pivotal(f, 1 << b, idx) {
                *slot += w;
            }
        }
    }
    let total = per_coord.iter().sum();
    Ok(InfluenceProfile {
        p,
        per_coord,
        total,
        monotone_input: f.is_monotone(),
    })
}

/// `E(S_n f)`.
pub fn expectation_sn_f(f: &BooleanFunction, p: f64) -> Result<f64> {
    let bias = Bias::interior(p)?;
    let n = f.arity();
    Ok(sum_weighted(n, bias, |idx| {
        if f.value(idx) {
            s_n_from_weight(n, idx.count_ones() as usize, bias)
        } else {
            0.0
        }
    }))
}

/// `E(|P(f)| f)`, the pivotal mass carried by `{f = 1}`.
pub fn pivotal_mass_on_ones(f: &BooleanFunction, p: f64) -> Result<f64> {
    let bias = Bias::new(p)?;
    Ok(sum_weighted(f.arity(), bias, |idx| {
        if f.value(idx) {
            f64::from(pivotal_count(f, idx))
        } else {
            0.0
        }
    }))
}

/// Expectations conditional on `{f = 1}`, computed by exact summation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalStats {
    pub p: f64,
    /// `P(f = 1)`.
    pub prob_one: f64,
    /// `E(|P(f)| | f = 1)`.
    pub cond_pivotal: f64,
    /// `E(S_n | f = 1)`.
    pub cond_sn: f64,
    /// `E(X_i f | f = 1)` for each coordinate.
    pub cond_xi: Vec<f64>,
    /// `P(i in P(f) | f = 1)` for each coordinate.
    pub cond_pivotal_coord: Vec<f64>,
}

pub fn conditional_stats(f: &BooleanFunction, p: f64) -> Result<ConditionalStats> {
    let bias = Bias::interior(p)?;
    let n = f.arity();
    let weights = LayerWeights::new(n, bias);
    let mut prob_one = 0.0;
    let mut pivotal = 0.0;
    let mut sn = 0.0;
    let mut coord = vec![0.0; n];
    for idx in (0..f.len()).filter(|&idx| f.value(idx)) {
        let w = weights.at_index(idx);
        prob_one += w;
        sn += s_n_from_weight(n, idx.count_ones() as usize, bias) * w;
        for (b, slot) in coord.iter_mut().enumerate() {
            if is_pivotal(f, 1 << b, idx) {
                *slot += w;
                pivotal += w;
            }
        }
    }
    if prob_one == 0.0 {
        return Err(Error::NullConditioning);
    }
    let cond_xi = correlations(f, bias)
        .into_iter()
        .map(|c| c / prob_one)
        .collect();
    Ok(ConditionalStats {
        p,
        prob_one,
        cond_pivotal: pivotal / prob_one,
        cond_sn: sn / prob_one,
        cond_xi,
        cond_pivotal_coord: coord.into_iter().map(|c| c / prob_one).collect(),
    })
}

/// Off-diagonal second-order correlations `c_ik = E(X_i X_k f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderMatrix {
    n: usize,
    p: f64,
    entries: Vec<f64>,
}

impl SecondOrderMatrix {
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `E(X_i X_k f)` for 1-based `i != k`; `None` on the diagonal or out of range.
    pub fn get(&self, i: usize, k: usize) -> Option<f64> {
        if i == k || i == 0 || k == 0 || i > self.n || k > self.n {
            None
        } else {
            Some(self.entries[(i - 1) * self.n + (k - 1)])
        }
    }

    /// `sum_{i != k} c_ik^2` over ordered pairs.
    pub fn off_diagonal_sum_of_squares(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for k in 0..self.n {
                if i != k {
                    let c = self.entries[i * self.n + k];
                    s += c * c;
                }
            }
        }
        s
    }
}

pub fn second_order(f: &BooleanFunction, p: f64) -> Result<SecondOrderMatrix> {
    let bias = Bias::interior(p)?;
    let n = f.arity();
    let weights = LayerWeights::new(n, bias);
    let (up, down) = (1.0 / bias.p(), -1.0 / bias.q());
    let mut entries = vec![0.0; n * n];
    let mut x = vec![0.0; n];
    for idx in (0..f.len()).filter(|&idx| f.value(idx)) {
        let w = weights.at_index(idx);
        for (b, xb) in x.iter_mut().enumerate() {
            *xb = if idx >> b & 1 == 1 { up } else { down };
        }
        for i in 0..n {
            for k in (i + 1)..n {
                entries[i * n + k] += x[i] * x[k] * w;
            }
        }
    }
    for i in 0..n {
        entries[i * n + i] = f64::NAN;
        for k in (i + 1)..n {
            entries[k * n + i] = entries[i * n + k];
        }
    }
    Ok(SecondOrderMatrix { n, p, entries })
}

/// `g_k(omega) = 1` iff `k` is pivotal for `f` at `omega`. The result never
/// depends on coordinate `k`.
pub fn pivotal_indicator(f: &BooleanFunction, k: usize) -> Result<BooleanFunction> {
    check_coordinate(f, k)?;
    let bit = 1u64 << (k - 1);
    let g = BooleanFunction::from_fn(f.arity(), |idx| is_pivotal(f, bit, idx))?
        .with_origin(format!("pivotal indicator of coordinate {k}"));
    debug_assert!((0..g.len()).all(|idx| g.value(idx | bit) == g.value(idx & !bit)));
    Ok(g)
}
