//! Generators: all monotone functions of small arity, random functions and
//! random monotone functions.

use rand::Rng;

use crate::error::{Error, Result};
use crate::function::{check_exact_arity, BooleanFunction};

/// Largest arity for [`monotone_functions`]; arity 6 already has
/// 7 828 354 members.
pub const MAX_MONOTONE_ENUMERATION: usize = 5;

/// Every monotone Boolean function of arity `n` (`1 <= n <= 5`), in a
/// deterministic order.
///
/// Built recursively: with `omega(n)` the top bit, a monotone `f` is a
/// pair `(f0, f1)` of monotone functions of arity `n - 1` with `f0 <= f1`
/// pointwise, where `f0` is the half with `omega(n) = 0`.
pub fn monotone_functions(n: usize) -> Result<Vec<BooleanFunction>> {
    if n == 0 || n > MAX_MONOTONE_ENUMERATION {
        return Err(Error::InvalidParameter(format!(
            "monotone enumeration supports 1..={MAX_MONOTONE_ENUMERATION}, got {n}"
        )));
    }
    Ok(monotone_tables(n)
        .into_iter()
        .map(|t| BooleanFunction::from_words(n, vec![t]).with_origin("monotone enumeration"))
        .collect())
}

/// Truth tables packed in one `u64` (valid for `n <= 6`).
fn monotone_tables(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0, 1];
    }
    let lower = monotone_tables(n - 1);
    let half = 1u32 << (n - 1);
    let mut out = Vec::new();
    for &f0 in &lower {
        for &f1 in &lower {
            if f0 & !f1 == 0 {
                out.push(f0 | (f1 << half));
            }
        }
    }
    out
}

/// Uniformly random truth table.
pub fn random_function<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(n, |_| rng.random()).map(|f| f.with_origin("random"))
}

/// Smallest up-set containing every `1` of `f`.
pub fn up_closure(f: &BooleanFunction) -> BooleanFunction {
    let n = f.arity();
    let mut bits: Vec<bool> = (0..f.len()).map(|idx| f.value(idx)).collect();
    for b in 0..n {
        let bit = 1usize << b;
        for idx in 0..bits.len() {
            if idx & bit == 0 && bits[idx] {
                bits[idx | bit] = true;
            }
        }
    }
    BooleanFunction::from_bits(n, &bits)
        .expect("arity already validated")
        .with_origin("up-closure")
}

/// Random monotone function: the up-closure of a random set of generators,
/// each nonzero configuration being a generator with probability `density`.
pub fn random_monotone<R: Rng + ?Sized>(
    n: usize,
    density: f64,
    rng: &mut R,
) -> Result<BooleanFunction> {
    check_exact_arity(n)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let seeds = BooleanFunction::from_fn(n, |idx| idx != 0 && rng.random_bool(density))?;
    Ok(up_closure(&seeds).with_origin("random monotone"))
}
