//! Points of the hypercube `{0,1}^n`.
//!
//! Coordinate `i` (1-based) is stored in bit `i - 1`, so for `n <= 64` a
//! configuration is exactly the unsigned index used by truth tables:
//! `omega(1)` is the least significant bit. The textual form written by
//! [`Configuration::to_word`] lists `omega(1) omega(2) ... omega(n)` from left
//! to right.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Configuration {
    /// The all-zeros configuration of arity `n`.
    pub fn zeros(n: usize) -> Self {
        Configuration {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut c = Self::zeros(n);
        for i in 0..n {
            c.set_bit(i, true);
        }
        c
    }

    /// Builds the configuration whose index is `index`. Only available for
    /// `n <= 64`.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidParameter(format!(
                "index form only covers n <= 64, got n = {n}"
            )));
        }
        if n < 64 && index >> n != 0 {
            return Err(Error::InvalidParameter(format!(
                "index {index} does not fit in {n} bits"
            )));
        }
        let mut c = Self::zeros(n);
        c.words[0] = index;
        Ok(c)
    }

    /// Parses a word such as `"0110"`, read as `omega(1)` first.
    pub fn from_word(word: &str) -> Result<Self> {
        let mut c = Self::zeros(word.len());
        for (pos, ch) in word.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => c.set_bit(pos, true),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unexpected character {other:?} in configuration word"
                    )))
                }
            }
        }
        Ok(c)
    }

    pub fn to_word(&self) -> String {
        (0..self.n)
            .map(|b| if self.bit(b) { '1' } else { '0' })
            .collect()
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// The unsigned index, when it fits in 64 bits.
    pub fn index(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.words[0])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `omega(i)` for a 1-based coordinate.
    pub fn get(&self, i: usize) -> Result<bool> {
        self.check_coordinate(i)?;
        Ok(self.bit(i - 1))
    }

    /// Returns a copy with `omega(i) = b`: `omega^i` for `b = true` and
    /// `omega_i` for `b = false`.
    pub fn set_coordinate(&self, i: usize, b: bool) -> Result<Self> {
        self.check_coordinate(i)?;
        let mut c = self.clone();
        c.set_bit(i - 1, b);
        Ok(c)
    }

    /// Hamming weight `|omega|`.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The configuration with every coordinate flipped.
    pub fn complement(&self) -> Self {
        let mut c = self.clone();
        for w in c.words.iter_mut() {
            *w = !*w;
        }
        c.clear_tail();
        c
    }

    pub(crate) fn check_coordinate(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::CoordinateOutOfRange { i, n: self.n })
        } else {
            Ok(())
        }
    }

    /// 0-based bit access; callers guarantee `b < n`.
    #[inline]
    pub(crate) fn bit(&self, b: usize) -> bool {
        (self.words[b / 64] >> (b % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_bit(&mut self, b: usize, v: bool) {
        let mask = 1u64 << (b % 64);
        if v {
            self.words[b / 64] |= mask;
        } else {
            self.words[b / 64] &= !mask;
        }
    }

    #[inline]
    pub(crate) fn set_index(&mut self, index: u64) {
        self.words[0] = index;
    }

    pub(crate) fn clear_tail(&mut self) {
        let rem = self.n % 64;
        let last = self.words.len() - 1;
        if self.n == 0 {
            self.words[0] = 0;
        } else if rem != 0 {
            self.words[last] &= (1u64 << rem) - 1;
        }
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({})", self.to_word())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word())
    }
}
