//! Seeded randomness. Every stochastic routine takes a 64-bit master seed and
//! a stream index; parallel work units get distinct streams so execution
//! order cannot reorder draws.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::{Dist, Joint};

/// A counter-split generator: one master seed, one stream per work unit.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random probability vector: uniform weights plus `floor`, normalized.
/// A positive floor keeps every atom in the support.
pub fn random_simplex(rng: &mut ChaCha12Rng, len: usize, floor: f64) -> Dist {
    let weights: Vec<f64> = (0..len).map(|_| rng.random::<f64>() + floor).collect();
    Dist::normalized(weights).expect("positive weights normalize")
}

/// Random joint distribution with full support.
pub fn random_joint(rng: &mut ChaCha12Rng, rows: usize, cols: usize) -> Joint {
    let weights: Vec<f64> = (0..rows * cols)
        .map(|_| rng.random::<f64>() + 1e-9)
        .collect();
    let sum: f64 = weights.iter().sum();
    Joint::new_unchecked(rows, cols, weights.into_iter().map(|w| w / sum).collect())
}

/// Cumulative table for repeated categorical draws.
pub struct Sampler {
    cum: Vec<f64>,
}

impl Sampler {
    pub fn new(dist: &Dist) -> Self {
        let mut cum = Vec::with_capacity(dist.len());
        let mut acc = 0.0;
        for &p in dist.probs() {
            acc += p;
            cum.push(acc);
        }
        Sampler { cum }
    }

    pub fn draw(&self, rng: &mut ChaCha12Rng) -> usize {
        let u: f64 = rng.random::<f64>() * self.cum.last().copied().unwrap_or(1.0);
        match self.cum.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
            Ok(i) | Err(i) => i.min(self.cum.len() - 1),
        }
    }
}

/// Bootstrap standard error of the mean of `values` (resampling with
/// replacement, `resamples` replicates).
pub fn bootstrap_mean_stderr(values: &[f64], resamples: usize, rng: &mut ChaCha12Rng) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..resamples {
        let mut acc = 0.0;
        for _ in 0..n {
            acc += values[rng.random_range(0..n)];
        }
        let mean = acc / n as f64;
        sum += mean;
        sum_sq += mean * mean;
    }
    let r = resamples as f64;
    let mean = sum / r;
    (sum_sq / r - mean * mean).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = {
            let mut rng = rng_for(7, 0);
            (0..4).map(|_| rng.random()).collect()
        };
        let b: Vec<u64> = {
            let mut rng = rng_for(7, 0);
            (0..4).map(|_| rng.random()).collect()
        };
        let c: Vec<u64> = {
            let mut rng = rng_for(7, 1);
            (0..4).map(|_| rng.random()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampler_matches_weights() {
        let d = Dist::new(vec![0.1, 0.6, 0.3]).unwrap();
        let sampler = Sampler::new(&d);
        let mut rng = rng_for(3, 0);
        let mut counts = [0usize; 3];
        let trials = 100_000;
        for _ in 0..trials {
            counts[sampler.draw(&mut rng)] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / trials as f64;
            assert!((freq - d.prob(i)).abs() < 0.01, "atom {i}: {freq}");
        }
    }

    #[test]
    fn bootstrap_stderr_tracks_binomial() {
        let mut rng = rng_for(11, 0);
        let p = 0.2;
        let n = 10_000;
        let values: Vec<f64> = (0..n)
            .map(|_| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
            .collect();
        let se = bootstrap_mean_stderr(&values, 200, &mut rng);
        let expected = (p * (1.0 - p) / n as f64).sqrt();
        assert!((se - expected).abs() < expected, "se {se} vs {expected}");
    }
}
