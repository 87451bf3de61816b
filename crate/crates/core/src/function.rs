//! Boolean functions: exact bit-packed truth tables and opaque oracles.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::config::Configuration;
use crate::error::{Error, Result};

/// Largest arity with an exact truth table (2^24 bits, 2 MiB).
pub const EXACT_CAP: usize = 24;

/// Anything that can be evaluated on a configuration of fixed arity.
///
/// `eval` must be deterministic. Callers pass configurations of arity
/// `self.arity()`; checked entry points such as [`discrete_derivative`]
/// validate that before evaluating.
pub trait Evaluate {
    fn arity(&self) -> usize;

    fn eval(&self, omega: &Configuration) -> bool;

    /// Human-readable description of where the function came from.
    fn origin(&self) -> String;
}

impl<T: Evaluate + ?Sized> Evaluate for &T {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, omega: &Configuration) -> bool {
        (**self).eval(omega)
    }
    fn origin(&self) -> String {
        (**self).origin()
    }
}

/// A Boolean function stored as a truth table over all `2^n` indices.
#[derive(Clone)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<u64>,
    origin: String,
    monotone: OnceLock<bool>,
    weights: OnceLock<Vec<u64>>,
}

impl BooleanFunction {
    /// Builds a table by evaluating `f` at every index in `0..2^n`.
    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> bool) -> Result<Self> {
        check_exact_arity(n)?;
        let len = 1u64 << n;
        let mut table = vec![0u64; table_words(n)];
        for idx in 0..len {
            if f(idx) {
                table[(idx / 64) as usize] |= 1 << (idx % 64);
            }
        }
        Ok(BooleanFunction::from_words(n, table))
    }

    /// Builds a table from one boolean per index.
    pub fn from_bits(n: usize, bits: &[bool]) -> Result<Self> {
        check_exact_arity(n)?;
        if bits.len() != 1usize << n {
            return Err(Error::TableFormat(format!(
                "expected {} entries for n = {n}, got {}",
                1usize << n,
                bits.len()
            )));
        }
        Self::from_fn(n, |idx| bits[idx as usize])
    }

    /// Tabulates any evaluator of arity at most [`EXACT_CAP`].
    pub fn tabulate<E: Evaluate + ?Sized>(source: &E) -> Result<Self> {
        let n = source.arity();
        let mut omega = Configuration::zeros(n);
        let mut f = Self::from_fn(n, |idx| {
            omega.set_index(idx);
            source.eval(&omega)
        })?;
        f.origin = source.origin();
        Ok(f)
    }

    pub(crate) fn from_words(n: usize, table: Vec<u64>) -> Self {
        debug_assert_eq!(table.len(), table_words(n));
        BooleanFunction {
            n,
            table,
            origin: String::from("table"),
            monotone: OnceLock::new(),
            weights: OnceLock::new(),
        }
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = origin.into();
        self
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// Number of configurations, `2^n`.
    pub fn len(&self) -> u64 {
        1u64 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `f` at a configuration index.
    #[inline]
    pub fn value(&self, index: u64) -> bool {
        (self.table[(index / 64) as usize] >> (index % 64)) & 1 == 1
    }

    /// Number of satisfying configurations `|f^{-1}(1)|`.
    pub fn count_ones(&self) -> u64 {
        self.table.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.len()
    }

    /// `true` iff `f(omega_i) <= f(omega^i)` for every index and coordinate.
    /// The answer is computed once and cached.
    pub fn is_monotone(&self) -> bool {
        *self.monotone.get_or_init(|| {
            (0..self.n).all(|b| {
                let bit = 1u64 << b;
                (0..self.len())
                    .filter(|idx| idx & bit == 0)
                    .all(|idx| !self.value(idx) || self.value(idx | bit))
            })
        })
    }

    /// `a_k = #{omega : f(omega) = 1, |omega| = k}` for `k = 0..=n`.
    pub fn weight_enumerator(&self) -> &[u64] {
        self.weights.get_or_init(|| {
            let mut a = vec![0u64; self.n + 1];
            for idx in 0..self.len() {
                if self.value(idx) {
                    a[idx.count_ones() as usize] += 1;
                }
            }
            a
        })
    }

    /// `delta_i f` at an index: `f(omega^i) - f(omega_i)` for 1-based `i`.
    #[cfg(test)]
    pub(crate) fn derivative_at(&self, i: usize, index: u64) -> i8 {
        let bit = 1u64 << (i - 1);
        self.value(index | bit) as i8 - self.value(index & !bit) as i8
    }

    /// Parses the two-line truth-table file format:
    ///
    /// ```text
    /// n=3
    /// 00010111
    /// ```
    ///
    /// Character `j` of the second line is `f` at index `j`, with
    /// `omega(1)` the least significant bit of `j`.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::TableFormat("empty input".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::TableFormat(format!("expected `n=<k>`, found {header:?}")))?
            .trim()
            .parse()
            .map_err(|_| Error::TableFormat(format!("bad arity in {header:?}")))?;
        if n == 0 {
            return Err(Error::TableFormat("arity must be at least 1".into()));
        }
        check_exact_arity(n)?;
        let body = lines
            .next()
            .ok_or_else(|| Error::TableFormat("missing table line".into()))?;
        if let Some(extra) = lines.next() {
            return Err(Error::TableFormat(format!(
                "unexpected trailing line {extra:?}"
            )));
        }
        if body.len() != 1usize << n {
            return Err(Error::TableFormat(format!(
                "table has {} characters, expected {} for n = {n}",
                body.len(),
                1usize << n
            )));
        }
        let bits = body
            .bytes()
            .enumerate()
            .map(|(pos, b)| match b {
                b'0' => Ok(false),
                b'1' => Ok(true),
                _ => Err(Error::TableFormat(format!(
                    "invalid character {:?} at position {pos}",
                    b as char
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(n, &bits)?.with_origin("table"))
    }

    /// Serializes to the truth-table file format (trailing newline included).
    pub fn to_table_string(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        s.extend((0..self.len()).map(|idx| if self.value(idx) { '1' } else { '0' }));
        s.push('\n');
        s
    }
}

impl PartialEq for BooleanFunction {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table
    }
}

impl Eq for BooleanFunction {}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BooleanFunction")
            .field("n", &self.n)
            .field("origin", &self.origin)
            .field("ones", &self.count_ones())
            .finish()
    }
}

impl Evaluate for BooleanFunction {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, omega: &Configuration) -> bool {
        self.value(omega.words()[0])
    }

    fn origin(&self) -> String {
        self.origin.clone()
    }
}

fn table_words(n: usize) -> usize {
    ((1usize << n) / 64).max(1)
}

pub(crate) fn check_exact_arity(n: usize) -> Result<()> {
    if n > EXACT_CAP {
        Err(Error::CapExceeded { n, cap: EXACT_CAP })
    } else {
        Ok(())
    }
}

/// A function known only through an evaluation procedure; arity is unbounded.
#[derive(Clone)]
pub struct FunctionOracle {
    n: usize,
    origin: String,
    eval: Arc<dyn Fn(&Configuration) -> bool + Send + Sync>,
}

impl FunctionOracle {
    pub fn new(
        n: usize,
        origin: impl Into<String>,
        eval: impl Fn(&Configuration) -> bool + Send + Sync + 'static,
    ) -> Self {
        FunctionOracle {
            n,
            origin: origin.into(),
            eval: Arc::new(eval),
        }
    }

    /// Wraps any thread-safe evaluator.
    pub fn from_evaluator<E: Evaluate + Send + Sync + 'static>(source: E) -> Self {
        let n = source.arity();
        let origin = source.origin();
        FunctionOracle::new(n, origin, move |omega| source.eval(omega))
    }
}

impl fmt::Debug for FunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionOracle")
            .field("n", &self.n)
            .field("origin", &self.origin)
            .finish()
    }
}

impl Evaluate for FunctionOracle {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, omega: &Configuration) -> bool {
        (self.eval)(omega)
    }

    fn origin(&self) -> String {
        self.origin.clone()
    }
}

fn check_shared_arity<E: Evaluate + ?Sized>(f: &E, omega: &Configuration) -> Result<()> {
    if f.arity() != omega.arity() {
        Err(Error::ArityMismatch {
            expected: f.arity(),
            found: omega.arity(),
        })
    } else {
        Ok(())
    }
}

/// `delta_i f(omega) = f(omega^i) - f(omega_i)`, one of -1, 0, 1.
pub fn discrete_derivative<E: Evaluate + ?Sized>(
    f: &E,
    i: usize,
    omega: &Configuration,
) -> Result<i8> {
    check_shared_arity(f, omega)?;
    let up = omega.set_coordinate(i, true)?;
    let down = omega.set_coordinate(i, false)?;
    Ok(f.eval(&up) as i8 - f.eval(&down) as i8)
}

/// The coordinates `i` (1-based, ascending) with `f(omega^i) != f(omega_i)`.
pub fn pivotal_set<E: Evaluate + ?Sized>(f: &E, omega: &Configuration) -> Result<Vec<usize>> {
    check_shared_arity(f, omega)?;
    let mut scratch = omega.clone();
    let mut out = Vec::new();
    for b in 0..omega.arity() {
        scratch.set_bit(b, true);
        let up = f.eval(&scratch);
        scratch.set_bit(b, false);
        let down = f.eval(&scratch);
        scratch.set_bit(b, omega.bit(b));
        if up != down {
            out.push(b + 1);
        }
    }
    Ok(out)
}
