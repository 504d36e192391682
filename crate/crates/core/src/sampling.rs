//! Seeded Monte Carlo plumbing.
//!
//! Draws are split into fixed-size chunks; chunk `k` uses a ChaCha8 generator
//! seeded with the master seed on stream `k`. The output therefore depends on
//! the seed and the sample count only, never on the thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Samples per independently seeded chunk.
pub const CHUNK: usize = 1 << 14;

/// A Monte Carlo proportion with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn from_hits(hits: usize, samples: usize) -> Self {
        let p = hits as f64 / samples as f64;
        Self {
            estimate: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }

    /// Whether `value` lies within `k` standard errors, where the standard
    /// error is taken from `value` itself so a zero hit count is not
    /// automatically exact.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        let se = (value * (1.0 - value) / self.samples as f64).sqrt().max(self.std_error);
        (self.estimate - value).abs() <= k * se + 1e-15
    }
}

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// `n` draws of `f`, evaluated chunk-parallel; deterministic given `seed`.
pub fn par_sample<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// Number of `i < n` for which `f` returns true; deterministic given `seed`.
pub fn par_count<F>(n: usize, seed: u64, f: F) -> usize
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).filter(|_| f(&mut rng)).count()
        })
        .sum()
}

pub fn fill_gaussian<R: Rng>(rng: &mut R, out: &mut [f64]) {
    for x in out.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
}

/// A uniform point on the unit sphere, written into `out` (normalised Gaussian).
pub fn fill_sphere<R: Rng>(rng: &mut R, out: &mut [f64]) {
    loop {
        fill_gaussian(rng, out);
        let n2: f64 = out.iter().map(|x| x * x).sum();
        if n2 > 0.0 {
            let inv = n2.sqrt().recip();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}
