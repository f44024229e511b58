//! Random tuples drawn from a point pool.
//!
//! Uniform draws from a continuous sample almost never repeat a coordinate,
//! yet most axioms and contraction cases are about repeated coordinates. Each
//! tuple therefore first picks a random coincidence pattern (a set
//! partition of its positions) and then fills every block with a distinct
//! pool point, preferring isolated points a quarter of the time.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spaces::Point;

pub struct TupleSampler<'a> {
    pool: &'a [Point],
    isolated: Vec<Point>,
    rng: ChaCha8Rng,
}

impl<'a> TupleSampler<'a> {
    pub fn new(pool: &'a [Point], isolated: Vec<Point>, seed: u64) -> Self {
        assert!(!pool.is_empty(), "sampling pool must be nonempty");
        TupleSampler { pool, isolated, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn tuple(&mut self, arity: usize) -> Vec<Point> {
        // Restricted growth string: block[i] <= max(block[..i]) + 1.
        let mut blocks = Vec::with_capacity(arity);
        let mut next = 0usize;
        for _ in 0..arity {
            let b = self.rng.gen_range(0..=next);
            if b == next {
                next += 1;
            }
            blocks.push(b);
        }
        let mut chosen: Vec<Point> = Vec::with_capacity(next);
        for _ in 0..next {
            chosen.push(self.fresh(&chosen));
        }
        blocks.into_iter().map(|b| chosen[b]).collect()
    }

    fn fresh(&mut self, taken: &[Point]) -> Point {
        for _ in 0..32 {
            let candidate = if !self.isolated.is_empty() && self.rng.gen_bool(0.25) {
                *self.isolated.choose(&mut self.rng).unwrap()
            } else {
                *self.pool.choose(&mut self.rng).unwrap()
            };
            if !taken.contains(&candidate) {
                return candidate;
            }
        }
        // Pool too small for distinct values; a repeat is still a valid tuple.
        *self.pool.choose(&mut self.rng).unwrap()
    }
}
