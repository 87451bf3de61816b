//! Seeded sampling estimators for functions too wide for an exact table.
//!
//! Samples are split into blocks of [`BLOCK_SIZE`]; block `b` draws from
//! ChaCha8 seeded with `seed` on stream `b`. Per-block tallies are integers
//! and are summed, so estimates are bit-identical whatever the number of
//! worker threads. Confidence intervals are the two-sided Hoeffding bound
//! for bounded i.i.d. summands.

use rand::distr::{Bernoulli, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::function::Evaluate;

/// Identifier of the pinned generator and stream layout.
pub const GENERATOR_ID: &str = "chacha8/seed_from_u64/stream-per-block-4096";

pub const BLOCK_SIZE: u64 = 4096;

/// A sample mean with its Hoeffding confidence interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleEstimate {
    pub mean: f64,
    pub samples: u64,
    /// Half-width of the `1 - delta` interval.
    pub half_width: f64,
    pub delta: f64,
    pub seed: u64,
    /// Summands lie in `[0, scale]`.
    pub scale: f64,
    pub generator: &'static str,
    pub notes: String,
}

impl SampleEstimate {
    pub fn interval(&self) -> (f64, f64) {
        (self.mean - self.half_width, self.mean + self.half_width)
    }

    pub fn contains(&self, value: f64) -> bool {
        (value - self.mean).abs() <= self.half_width
    }
}

/// `sqrt(ln(2/delta) / (2m))`, the two-sided Hoeffding half-width for the
/// mean of `m` summands in `[0, 1]`.
pub fn hoeffding_half_width(m: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * m as f64)).sqrt()
}

fn coin(p: f64) -> Result<Bernoulli> {
    Bernoulli::new(p).map_err(|_| Error::Domain { p, range: "[0, 1]" })
}

fn fill<R: Rng + ?Sized>(omega: &mut Configuration, coin: &Bernoulli, rng: &mut R) {
    for b in 0..omega.arity() {
        omega.set_bit(b, coin.sample(rng));
    }
}

/// Draws one configuration with independent coordinates, each equal to 1
/// with probability `p`.
pub fn sample_config<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Configuration> {
    let coin = coin(p)?;
    let mut omega = Configuration::zeros(n);
    fill(&mut omega, &coin, rng);
    Ok(omega)
}

/// The generator used for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn validate(m: u64, delta: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "sample count m must be at least 1".into(),
        ));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Runs `m` samples in blocks; `tally` returns the integer total for one
/// block given its generator and sample count.
fn run_blocks<T>(m: u64, seed: u64, tally: T) -> u64
where
    T: Fn(&mut ChaCha8Rng, u64) -> u64 + Sync,
{
    let blocks = m.div_ceil(BLOCK_SIZE);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = BLOCK_SIZE.min(m - b * BLOCK_SIZE);
            tally(&mut block_rng(seed, b), count)
        })
        .sum()
}

/// Estimates `E_p(f)` from `m` samples.
pub fn estimate_mean<E: Evaluate + Sync + ?Sized>(
    oracle: &E,
    p: f64,
    m: u64,
    delta: f64,
    seed: u64,
) -> Result<SampleEstimate> {
    validate(m, delta)?;
    let coin = coin(p)?;
    let n = oracle.arity();
    let hits = run_blocks(m, seed, |rng, count| {
        let mut omega = Configuration::zeros(n);
        (0..count)
            .filter(|_| {
                fill(&mut omega, &coin, rng);
                oracle.eval(&omega)
            })
            .count() as u64
    });
    Ok(SampleEstimate {
        mean: hits as f64 / m as f64,
        samples: m,
        half_width: hoeffding_half_width(m, delta),
        delta,
        seed,
        scale: 1.0,
        generator: GENERATOR_ID,
        notes: String::new(),
    })
}

/// Estimates `Inf_i(p)`: each sample scores `|f(omega^i) - f(omega_i)|`.
pub fn estimate_influence<E: Evaluate + Sync + ?Sized>(
    oracle: &E,
    i: usize,
    p: f64,
    m: u64,
    delta: f64,
    seed: u64,
) -> Result<SampleEstimate> {
    validate(m, delta)?;
    let coin = coin(p)?;
    let n = oracle.arity();
    if i == 0 || i > n {
        return Err(Error::CoordinateOutOfRange { i, n });
    }
    let hits = run_blocks(m, seed, |rng, count| {
        let mut omega = Configuration::zeros(n);
        (0..count)
            .filter(|_| {
                fill(&mut omega, &coin, rng);
                omega.set_bit(i - 1, true);
                let up = oracle.eval(&omega);
                omega.set_bit(i - 1, false);
                up != oracle.eval(&omega)
            })
            .count() as u64
    });
    Ok(SampleEstimate {
        mean: hits as f64 / m as f64,
        samples: m,
        half_width: hoeffding_half_width(m, delta),
        delta,
        seed,
        scale: 1.0,
        generator: GENERATOR_ID,
        notes: String::new(),
    })
}

/// Number of pivotal coordinates among `coords` (0-based) at `omega`.
fn count_pivotal<E: Evaluate + ?Sized>(
    oracle: &E,
    omega: &mut Configuration,
    coords: impl Iterator<Item = usize>,
) -> u64 {
    let base = oracle.eval(omega);
    let mut count = 0;
    for b in coords {
        let v = omega.bit(b);
        omega.set_bit(b, !v);
        if oracle.eval(omega) != base {
            count += 1;
        }
        omega.set_bit(b, v);
    }
    count
}

/// Estimates `E|P(f)|`. Each sample counts the pivotal coordinates, either
/// all `n` of them or a uniform `k`-subset scaled by `n / k`; in both cases
/// a summand lies in `[0, n]` and the half-width is `n` times the unit
/// Hoeffding half-width.
pub fn estimate_total_influence<E: Evaluate + Sync + ?Sized>(
    oracle: &E,
    p: f64,
    m: u64,
    delta: f64,
    seed: u64,
    coordinate_subsample: Option<usize>,
) -> Result<SampleEstimate> {
    validate(m, delta)?;
    let coin = coin(p)?;
    let n = oracle.arity();
    if let Some(k) = coordinate_subsample {
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "coordinate subsample must lie in 1..={n}, got {k}"
            )));
        }
    }
    let total = run_blocks(m, seed, |rng, count| {
        let mut omega = Configuration::zeros(n);
        let mut sum = 0;
        for _ in 0..count {
            fill(&mut omega, &coin, rng);
            sum += match coordinate_subsample {
                None => count_pivotal(oracle, &mut omega, 0..n),
                Some(k) => {
                    let picked = rand::seq::index::sample(rng, n, k);
                    count_pivotal(oracle, &mut omega, picked.into_iter())
                }
            };
        }
        sum
    });
    let (factor, notes) = match coordinate_subsample {
        None => (1.0, "full coordinate scan; summands in [0, n]".to_string()),
        Some(k) => (
            n as f64 / k as f64,
            format!("{k}-coordinate subsample scaled by n/k; summands in [0, n]"),
        ),
    };
    let scale = n as f64;
    Ok(SampleEstimate {
        mean: total as f64 * factor / m as f64,
        samples: m,
        half_width: scale * hoeffding_half_width(m, delta),
        delta,
        seed,
        scale,
        generator: GENERATOR_ID,
        notes,
    })
}
