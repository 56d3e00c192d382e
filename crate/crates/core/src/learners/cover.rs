//! The randomized cover behind the sharpness example: `M = 4n^m / (m k^m)`
//! subsets of `[n]`, each of size `k = floor(n/2)`, redrawn until the union
//! measure of `T = union of T_i^m` (estimated by Monte Carlo) lands in
//! `[1/m, 4/m]`.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::concepts::{ConceptClass, Hypothesis, Sample};
use crate::learners::{KernelDist, LearnerKernel, SigKey};
use crate::rng::rng_for;
use crate::{Error, Result};

pub const COVER_RETRY_LIMIT: usize = 20;

/// The drawn cover sets plus the Monte Carlo certificate of their union
/// measure.
pub struct CoverSets {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub sets: Vec<Vec<bool>>,
    pub measure_estimate: f64,
    pub mc_trials: usize,
    pub redraws: usize,
}

impl CoverSets {
    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    /// The formula count `floor(4 n^m / (m k^m))`.
    pub fn formula_count(n: usize, m: usize) -> usize {
        let k = n / 2;
        let ratio = (n as f64 / k as f64).powi(m as i32);
        (4.0 * ratio / m as f64).floor() as usize
    }

    pub fn contains(&self, set: usize, x: usize) -> bool {
        self.sets[set][x - 1]
    }

    /// True when all points (1-based) lie inside `T_i` for some `i`; returns
    /// the smallest such `i`.
    pub fn covering_set(&self, points: &[usize]) -> Option<usize> {
        (0..self.sets.len()).find(|&i| points.iter().all(|&x| self.sets[i][x - 1]))
    }
}

/// Draws the cover with the stated sizes, estimating the union measure by
/// `mc_trials` Monte Carlo draws and redrawing (up to [`COVER_RETRY_LIMIT`])
/// until the estimate lies in `[1/m, 4/m]`.
pub fn build_cover(n: usize, m: usize, seed: u64, mc_trials: usize) -> Result<CoverSets> {
    if n < 4 || m < 2 {
        return Err(Error::Invalid(format!(
            "cover needs n >= 4 and m >= 2, got n = {n}, m = {m}"
        )));
    }
    let k = n / 2;
    let count = CoverSets::formula_count(n, m);
    let mut estimates = Vec::new();
    for attempt in 0..COVER_RETRY_LIMIT {
        let mut rng = rng_for(seed, attempt as u64);
        let sets: Vec<Vec<bool>> = (0..count)
            .map(|_| {
                let mut bits = vec![false; n];
                for idx in sample_indices(&mut rng, n, k) {
                    bits[idx] = true;
                }
                bits
            })
            .collect();
        let estimate = union_measure_estimate(&sets, n, m, mc_trials, &mut rng);
        estimates.push(estimate);
        if estimate >= 1.0 / m as f64 && estimate <= 4.0 / m as f64 {
            return Ok(CoverSets {
                n,
                m,
                k,
                sets,
                measure_estimate: estimate,
                mc_trials,
                redraws: attempt,
            });
        }
    }
    Err(Error::CoverRetries { estimates })
}

fn union_measure_estimate(
    sets: &[Vec<bool>],
    n: usize,
    m: usize,
    trials: usize,
    rng: &mut ChaCha12Rng,
) -> f64 {
    let mut hits = 0usize;
    let mut points = vec![0usize; m];
    for _ in 0..trials {
        for slot in points.iter_mut() {
            *slot = rng.random_range(0..n);
        }
        if sets
            .iter()
            .any(|bits| points.iter().all(|&x| bits[x]))
        {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

/// The deterministic sharpness learner: on an all-ones-labeled sample it
/// outputs `h_i` (the indicator of `T_i`) for the minimum `i` whose set
/// contains every sample point, and the all-ones function otherwise.
pub struct SharpnessLearner {
    cover: CoverSets,
    class: ConceptClass,
}

impl SharpnessLearner {
    pub fn new(cover: CoverSets) -> Self {
        let mut hypotheses: Vec<Hypothesis> = cover
            .sets
            .iter()
            .map(|bits| Hypothesis::Mask(bits.clone()))
            .collect();
        hypotheses.push(Hypothesis::AllOnes);
        let class = ConceptClass::from_hypotheses(
            &format!("cover[{}x{}]", cover.set_count(), cover.n),
            cover.n,
            hypotheses,
        );
        SharpnessLearner { cover, class }
    }

    pub fn cover(&self) -> &CoverSets {
        &self.cover
    }

    pub fn all_ones_index(&self) -> usize {
        self.class.size() - 1
    }

    fn decide(&self, s: &Sample) -> Result<usize> {
        if s.examples().iter().any(|ex| !ex.y) {
            return Err(Error::NotAllOnes);
        }
        let points: Vec<usize> = s.examples().iter().map(|ex| ex.x).collect();
        Ok(self
            .cover
            .covering_set(&points)
            .unwrap_or_else(|| self.all_ones_index()))
    }
}

impl LearnerKernel for SharpnessLearner {
    fn name(&self) -> &str {
        "sharpness"
    }

    fn class(&self) -> &ConceptClass {
        &self.class
    }

    fn kernel(&self, s: &Sample) -> Result<KernelDist> {
        Ok(KernelDist::Point(self.decide(s)?))
    }

    fn signature_key(&self, s: &Sample) -> Result<Option<SigKey>> {
        Ok(Some(vec![self.decide(s)? as u32]))
    }
}
