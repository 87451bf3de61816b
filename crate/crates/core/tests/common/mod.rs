//! Reference computations for integration tests. Everything here works
//! directly from truth-table values and per-coordinate products, sharing no
//! summation code with the library.

#![allow(dead_code)]

use pivotal::BooleanFunction;

/// `P(omega)` as a literal product over coordinates.
pub fn prob(n: usize, idx: u64, p: f64) -> f64 {
    (0..n)
        .map(|b| if idx >> b & 1 == 1 { p } else { 1.0 - p })
        .product()
}

pub fn x(idx: u64, b: usize, p: f64) -> f64 {
    if idx >> b & 1 == 1 {
        1.0 / p
    } else {
        -1.0 / (1.0 - p)
    }
}

/// `E g` for `g` given per index.
pub fn expect(n: usize, p: f64, g: impl Fn(u64) -> f64) -> f64 {
    (0..1u64 << n).map(|idx| g(idx) * prob(n, idx, p)).sum()
}

pub fn value(f: &BooleanFunction, idx: u64) -> f64 {
    if f.value(idx) {
        1.0
    } else {
        0.0
    }
}

pub fn mean(f: &BooleanFunction, p: f64) -> f64 {
    expect(f.arity(), p, |idx| value(f, idx))
}

pub fn pivotal(f: &BooleanFunction, b: usize, idx: u64) -> bool {
    f.value(idx ^ (1 << b)) != f.value(idx)
}

pub fn influence(f: &BooleanFunction, b: usize, p: f64) -> f64 {
    expect(
        f.arity(),
        p,
        |idx| if pivotal(f, b, idx) { 1.0 } else { 0.0 },
    )
}

pub fn total_influence(f: &BooleanFunction, p: f64) -> f64 {
    (0..f.arity()).map(|b| influence(f, b, p)).sum()
}

/// `E(S_n f)` with `S_n` summed from the characters.
pub fn e_sn_f(f: &BooleanFunction, p: f64) -> f64 {
    let n = f.arity();
    expect(n, p, |idx| {
        value(f, idx) * (0..n).map(|b| x(idx, b, p)).sum::<f64>()
    })
}

/// `C(n, k)` exactly; valid while the result fits in `u128`.
pub fn choose(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut c = 1u128;
    for j in 0..k {
        c = c * (n - j) / (j + 1);
    }
    c
}

/// `P(|K - np| >= t)` for `K ~ Bin(n, p)`, by a pmf recurrence started at
/// the mode so that no term underflows prematurely.
pub fn binomial_two_sided_tail(n: u64, p: f64, t: f64) -> f64 {
    let q = 1.0 - p;
    let mode = ((n as f64 + 1.0) * p).floor().min(n as f64) as u64;
    let mut pmf = vec![0.0f64; n as usize + 1];
    pmf[mode as usize] = 1.0;
    for k in (mode + 1)..=n {
        pmf[k as usize] = pmf[k as usize - 1] * ((n - k + 1) as f64 / k as f64) * (p / q);
    }
    for k in (0..mode).rev() {
        pmf[k as usize] = pmf[k as usize + 1] * ((k + 1) as f64 / (n - k) as f64) * (q / p);
    }
    let total: f64 = pmf.iter().sum();
    let center = n as f64 * p;
    pmf.iter()
        .enumerate()
        .filter(|(k, _)| (*k as f64 - center).abs() >= t * (1.0 - 1e-12))
        .map(|(_, w)| w / total)
        .sum()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
