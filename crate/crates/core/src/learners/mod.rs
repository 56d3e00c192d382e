//! Learner kernels: each learner exposes its exact conditional distribution
//! over hypothesis indices given a sample, plus a seeded sampler. Mutual
//! information is computed from these kernels, never from traces.

mod boosted;
mod cover;
mod net;
mod signatures;

pub use boosted::Boosted;
pub use cover::{build_cover, CoverSets, SharpnessLearner, COVER_RETRY_LIMIT};
pub use net::{NetHierarchy, NetLearner};
pub use signatures::{
    far_optimal_generic_table, point_function_generic_table, threshold_signatures,
    visit_threshold_intervals, ThresholdSig, ThresholdSignatures,
};

use rand_chacha::ChaCha12Rng;

use crate::concepts::{ClassKind, ConceptClass, Hypothesis, RealizableDistribution, Sample};
use crate::{Dist, Error, Result};

/// Sparse distribution over hypothesis indices — the value of a learner
/// kernel at one sample. The closed forms keep interval kernels O(1).
#[derive(Clone, Debug, PartialEq)]
pub enum KernelDist {
    /// Deterministic output.
    Point(usize),
    /// Uniform over the half-open index range `[lo, hi)`.
    UniformRange { lo: usize, hi: usize },
    /// Explicit support (strictly increasing) with matching probabilities.
    Sparse { support: Vec<usize>, probs: Vec<f64> },
}

impl KernelDist {
    pub fn uniform_range(lo: usize, hi: usize) -> Self {
        debug_assert!(lo < hi);
        if hi - lo == 1 {
            KernelDist::Point(lo)
        } else {
            KernelDist::UniformRange { lo, hi }
        }
    }

    /// Canonicalizing constructor: a single atom is a `Point`, a contiguous
    /// equal-probability support is a `UniformRange`.
    pub fn sparse(support: Vec<usize>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(support.len(), probs.len());
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        if support.len() == 1 {
            return KernelDist::Point(support[0]);
        }
        let contiguous = support.windows(2).all(|w| w[1] == w[0] + 1);
        let flat = 1.0 / support.len() as f64;
        if contiguous && probs.iter().all(|&p| p == flat) {
            return KernelDist::UniformRange {
                lo: support[0],
                hi: support[support.len() - 1] + 1,
            };
        }
        KernelDist::Sparse { support, probs }
    }

    pub fn uniform_over(mut support: Vec<usize>) -> Self {
        support.sort_unstable();
        let p = 1.0 / support.len() as f64;
        let probs = vec![p; support.len()];
        KernelDist::sparse(support, probs)
    }

    pub fn support_size(&self) -> usize {
        match self {
            KernelDist::Point(_) => 1,
            KernelDist::UniformRange { lo, hi } => hi - lo,
            KernelDist::Sparse { support, .. } => support.len(),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.support_size() == 1
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match self {
            KernelDist::Point(h) => Box::new(std::iter::once((*h, 1.0))),
            KernelDist::UniformRange { lo, hi } => {
                let p = 1.0 / (hi - lo) as f64;
                Box::new((*lo..*hi).map(move |h| (h, p)))
            }
            KernelDist::Sparse { support, probs } => {
                Box::new(support.iter().copied().zip(probs.iter().copied()))
            }
        }
    }

    pub fn prob(&self, h: usize) -> f64 {
        match self {
            KernelDist::Point(p) => {
                if *p == h {
                    1.0
                } else {
                    0.0
                }
            }
            KernelDist::UniformRange { lo, hi } => {
                if h >= *lo && h < *hi {
                    1.0 / (hi - lo) as f64
                } else {
                    0.0
                }
            }
            KernelDist::Sparse { support, probs } => support
                .binary_search(&h)
                .map(|i| probs[i])
                .unwrap_or(0.0),
        }
    }

    /// Mass on the half-open index range `[lo, hi)`.
    pub fn mass_in(&self, lo: usize, hi: usize) -> f64 {
        match self {
            KernelDist::Point(h) => {
                if *h >= lo && *h < hi {
                    1.0
                } else {
                    0.0
                }
            }
            KernelDist::UniformRange { lo: a, hi: b } => {
                let overlap = b.min(&hi).saturating_sub(*a.max(&lo));
                overlap as f64 / (b - a) as f64
            }
            KernelDist::Sparse { support, probs } => {
                let start = support.partition_point(|&h| h < lo);
                let end = support.partition_point(|&h| h < hi);
                probs[start..end].iter().sum()
            }
        }
    }

    pub fn to_dense(&self, len: usize) -> Dist {
        let mut probs = vec![0.0; len];
        for (h, p) in self.iter() {
            probs[h] = p;
        }
        Dist::new_unchecked(probs)
    }

    pub fn entropy_bits(&self) -> f64 {
        self.iter()
            .filter(|&(_, p)| p > 0.0)
            .map(|(_, p)| -p * p.log2())
            .sum()
    }

    /// Total variation distance between two kernels.
    pub fn tv(&self, other: &KernelDist) -> f64 {
        let a: Vec<(usize, f64)> = self.iter().collect();
        let b: Vec<(usize, f64)> = other.iter().collect();
        let (mut i, mut j, mut sum) = (0, 0, 0.0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&(ha, pa)), Some(&(hb, pb))) => {
                    if ha == hb {
                        sum += (pa - pb).abs();
                        i += 1;
                        j += 1;
                    } else if ha < hb {
                        sum += pa;
                        i += 1;
                    } else {
                        sum += pb;
                        j += 1;
                    }
                }
                (Some(&(_, pa)), None) => {
                    sum += pa;
                    i += 1;
                }
                (None, Some(&(_, pb))) => {
                    sum += pb;
                    j += 1;
                }
                (None, None) => break,
            }
        }
        sum / 2.0
    }

    /// `KL(self || q)` in bits against a dense reference. With a prefix table
    /// of `log2 q` (entry `i` = sum over indices < i), interval kernels cost
    /// O(1); that is what keeps the prior-bound sweep fast.
    pub fn kl_to_dense(&self, q: &[f64], q_log2_prefix: Option<&[f64]>) -> f64 {
        match (self, q_log2_prefix) {
            (KernelDist::Point(h), _) => {
                if q[*h] == 0.0 {
                    f64::INFINITY
                } else {
                    -q[*h].log2()
                }
            }
            (KernelDist::UniformRange { lo, hi }, Some(prefix)) => {
                let len = (hi - lo) as f64;
                let log_q_sum = prefix[*hi] - prefix[*lo];
                if log_q_sum.is_infinite() {
                    return f64::INFINITY;
                }
                -len.log2() - log_q_sum / len
            }
            _ => {
                let mut total = 0.0;
                for (h, p) in self.iter() {
                    if p == 0.0 {
                        continue;
                    }
                    if q[h] == 0.0 {
                        return f64::INFINITY;
                    }
                    total += p * (p / q[h]).log2();
                }
                total.max(0.0)
            }
        }
    }

    /// All atom indices shifted by `delta` (used to move between hypothesis
    /// indices and 1-based threshold values).
    pub fn shifted(&self, delta: usize) -> KernelDist {
        match self {
            KernelDist::Point(h) => KernelDist::Point(h + delta),
            KernelDist::UniformRange { lo, hi } => KernelDist::UniformRange {
                lo: lo + delta,
                hi: hi + delta,
            },
            KernelDist::Sparse { support, probs } => KernelDist::Sparse {
                support: support.iter().map(|h| h + delta).collect(),
                probs: probs.clone(),
            },
        }
    }

    pub fn draw(&self, rng: &mut ChaCha12Rng) -> usize {
        use rand::Rng;
        match self {
            KernelDist::Point(h) => *h,
            KernelDist::UniformRange { lo, hi } => rng.random_range(*lo..*hi),
            KernelDist::Sparse { support, probs } => {
                let mut u: f64 = rng.random();
                for (&h, &p) in support.iter().zip(probs) {
                    u -= p;
                    if u <= 0.0 {
                        return h;
                    }
                }
                *support.last().unwrap()
            }
        }
    }
}

/// Grouping key for samples on which a learner's kernel is constant.
pub type SigKey = Vec<u32>;

/// A signature table: exact mass and kernel per signature class of `D^m`.
#[derive(Clone, Debug)]
pub struct SigTable {
    pub entries: Vec<(f64, KernelDist)>,
}

impl SigTable {
    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|(w, _)| w).sum()
    }
}

/// A learning algorithm as an explicit kernel `sample -> distribution over
/// hypothesis indices` of its class.
pub trait LearnerKernel {
    fn name(&self) -> &str;

    fn class(&self) -> &ConceptClass;

    /// The exact conditional distribution of the output given `s`.
    fn kernel(&self, s: &Sample) -> Result<KernelDist>;

    /// Key of the signature class of `s`, or `None` when the learner
    /// declares no signature (the aggregation fast paths then refuse).
    fn signature_key(&self, s: &Sample) -> Result<Option<SigKey>>;

    /// Closed-form signature table under `D^m`, when one is available
    /// without enumerating the sample space.
    fn signature_table(&self, d: &RealizableDistribution, m: usize) -> Result<Option<SigTable>> {
        let _ = (d, m);
        Ok(None)
    }

    /// For threshold-class learners whose kernel factors through the
    /// consistent interval `[lo, hi)` of hypothesis indices.
    fn interval_kernel(&self, lo: usize, hi: usize) -> Option<KernelDist> {
        let _ = (lo, hi);
        None
    }

    /// Draws one output hypothesis; frequencies converge to [`Self::kernel`].
    fn sample_hypothesis(&self, s: &Sample, rng: &mut ChaCha12Rng) -> Result<usize> {
        Ok(self.kernel(s)?.draw(rng))
    }
}

/// The generic information learner: a uniformly random hypothesis from the
/// consistent set.
pub struct GenericLearner {
    class: ConceptClass,
    name: String,
}

impl GenericLearner {
    pub fn new(class: ConceptClass) -> Self {
        let name = format!("generic({})", class.name());
        GenericLearner { class, name }
    }
}

impl LearnerKernel for GenericLearner {
    fn name(&self) -> &str {
        &self.name
    }

    fn class(&self) -> &ConceptClass {
        &self.class
    }

    fn kernel(&self, s: &Sample) -> Result<KernelDist> {
        if let Some((lo, hi)) = self.class.consistent_interval(s) {
            if lo >= hi {
                return Err(Error::NonRealizable);
            }
            return Ok(KernelDist::uniform_range(lo, hi));
        }
        let consistent = self.class.consistent_set(s);
        if consistent.is_empty() {
            return Err(Error::NonRealizable);
        }
        Ok(KernelDist::uniform_over(consistent))
    }

    fn signature_key(&self, s: &Sample) -> Result<Option<SigKey>> {
        if let Some((lo, hi)) = self.class.consistent_interval(s) {
            if lo >= hi {
                return Err(Error::NonRealizable);
            }
            return Ok(Some(vec![lo as u32, hi as u32]));
        }
        let consistent = self.class.consistent_set(s);
        if consistent.is_empty() {
            return Err(Error::NonRealizable);
        }
        Ok(Some(consistent.into_iter().map(|i| i as u32).collect()))
    }

    fn signature_table(&self, d: &RealizableDistribution, m: usize) -> Result<Option<SigTable>> {
        match self.class.kind() {
            ClassKind::Thresholds => {
                let sigs = threshold_signatures(d, m, self.class.domain_size())?;
                let entries = sigs
                    .entries
                    .into_iter()
                    .map(|sig| (sig.mass, KernelDist::uniform_range(sig.lo, sig.hi)))
                    .collect();
                Ok(Some(SigTable { entries }))
            }
            ClassKind::PointFunctions => {
                Ok(point_function_generic_table(d, m, self.class.size()))
            }
            ClassKind::FarOptimal if *d.target() == Hypothesis::Threshold(2) => {
                Ok(Some(far_optimal_generic_table(d, m, self.class.size())))
            }
            _ => Ok(None),
        }
    }

    fn interval_kernel(&self, lo: usize, hi: usize) -> Option<KernelDist> {
        if self.class.kind() == ClassKind::Thresholds && lo < hi {
            Some(KernelDist::uniform_range(lo, hi))
        } else {
            None
        }
    }
}

/// Deterministic proper consistent ERM for thresholds: outputs `f_t` with
/// `t = (largest zero-labeled point) + 1`, i.e. the minimum consistent index.
pub struct MinThresholdErm {
    class: ConceptClass,
}

impl MinThresholdErm {
    pub fn new(n: usize) -> Self {
        MinThresholdErm {
            class: ConceptClass::thresholds(n),
        }
    }

    fn interval(&self, s: &Sample) -> Result<(usize, usize)> {
        let (lo, hi) = self.class.consistent_interval(s).unwrap();
        if lo >= hi {
            return Err(Error::NonRealizable);
        }
        Ok((lo, hi))
    }
}

impl LearnerKernel for MinThresholdErm {
    fn name(&self) -> &str {
        "min-threshold-erm"
    }

    fn class(&self) -> &ConceptClass {
        &self.class
    }

    fn kernel(&self, s: &Sample) -> Result<KernelDist> {
        let (lo, _) = self.interval(s)?;
        Ok(KernelDist::Point(lo))
    }

    fn signature_key(&self, s: &Sample) -> Result<Option<SigKey>> {
        let (lo, _) = self.interval(s)?;
        Ok(Some(vec![lo as u32]))
    }

    fn signature_table(&self, d: &RealizableDistribution, m: usize) -> Result<Option<SigTable>> {
        let sigs = threshold_signatures(d, m, self.class.domain_size())?;
        let entries = sigs
            .entries
            .into_iter()
            .map(|sig| (sig.mass, KernelDist::Point(sig.lo)))
            .collect();
        Ok(Some(SigTable { entries }))
    }

    fn interval_kernel(&self, lo: usize, hi: usize) -> Option<KernelDist> {
        if lo < hi {
            Some(KernelDist::Point(lo))
        } else {
            None
        }
    }
}

/// The deterministic low-information ERM for the far-optimal class: when the
/// sample is consistent with `1_{x>1}` it outputs `1_{x>1}`, otherwise the
/// point function `1_{x=k}` with minimal `k`.
pub struct FarOptimalErm {
    class: ConceptClass,
}

impl FarOptimalErm {
    pub fn new(n: usize) -> Self {
        FarOptimalErm {
            class: ConceptClass::far_optimal(n),
        }
    }

    fn threshold_index(&self) -> usize {
        self.class.size() - 1
    }

    fn decide(&self, s: &Sample) -> Result<usize> {
        use crate::concepts::disagreement_count;
        let threshold = self.class.hypothesis(self.threshold_index());
        if disagreement_count(threshold, s) == 0 {
            return Ok(self.threshold_index());
        }
        for idx in 0..self.threshold_index() {
            if disagreement_count(self.class.hypothesis(idx), s) == 0 {
                return Ok(idx);
            }
        }
        Err(Error::NonRealizable)
    }
}

impl LearnerKernel for FarOptimalErm {
    fn name(&self) -> &str {
        "far-optimal-erm"
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

    fn signature_table(&self, d: &RealizableDistribution, m: usize) -> Result<Option<SigTable>> {
        let _ = m;
        // Under a target of 1_{x>1} every realizable sample satisfies the
        // event: the output is constant.
        if *d.target() == Hypothesis::Threshold(2) {
            return Ok(Some(SigTable {
                entries: vec![(1.0, KernelDist::Point(self.threshold_index()))],
            }));
        }
        Ok(None)
    }
}
