//! Seeded random source and exact categorical draws.
//!
//! A draw picks one integer `k` uniformly from `0..L`, where `L` is the least
//! common multiple of the weight denominators, and returns the first index
//! whose cumulative weight (scaled by `L`) exceeds `k`. Every weight is hit
//! with exactly its rational probability; no floating point is involved.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// ChaCha8 stream seeded from a `u64`; the seed is kept for reporting.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Draws an index with probability `weights[i]`. Weights must be
    /// nonnegative and sum to exactly 1.
    pub fn draw(&mut self, weights: &[Rational]) -> Result<usize> {
        if weights.is_empty()
            || weights.iter().any(|w| w.is_negative())
            || crate::rational::sum(weights) != Rational::from_integer(1)
        {
            return Err(Error::BadDistribution);
        }
        let common = weights.iter().fold(1i64, |acc, w| acc.lcm(w.denom()));
        let k = self.inner.random_range(0..common as u64) as i64;
        let mut cumulative = 0i64;
        for (i, w) in weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            cumulative += w.numer() * (common / w.denom());
            if k < cumulative {
                return Ok(i);
            }
        }
        unreachable!("cumulative weight reaches the common denominator")
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
