//! Finite domains, labeled samples, hypothesis classes, realizable
//! distributions, and error functionals.
//!
//! Domains are `[N] = {1, ..., N}`, labels are boolean. Hypothesis classes
//! are enumerable; hypothesis indices into [`ConceptClass::hypotheses`] are
//! the atoms all information computations run over.

use rand_chacha::ChaCha12Rng;

use crate::rng::Sampler;
use crate::{Dist, Error, Result};

/// A labeled example `(x, y)` with `x` in `[N]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Example {
    pub x: usize,
    pub y: bool,
}

/// An ordered tuple of examples. Order is significant: the lower-bound
/// constructions place specific examples in fixed positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sample {
    examples: Vec<Example>,
}

impl Sample {
    pub fn new(examples: Vec<Example>) -> Result<Self> {
        if examples.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Sample { examples })
    }

    pub fn from_pairs(pairs: &[(usize, bool)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(x, y)| Example { x, y }).collect())
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn example(&self, i: usize) -> Example {
        self.examples[i]
    }

    /// The sample with the `i`-th example replaced by `z` (the `S^{(i,z)}`
    /// of the stability analysis).
    pub fn replace(&self, i: usize, z: Example) -> Sample {
        let mut examples = self.examples.clone();
        examples[i] = z;
        Sample { examples }
    }

    /// A contiguous sub-sample `[start, start + len)`.
    pub fn segment(&self, start: usize, len: usize) -> Result<Sample> {
        if start + len > self.examples.len() {
            return Err(Error::SampleLength {
                expected: start + len,
                got: self.examples.len(),
            });
        }
        Sample::new(self.examples[start..start + len].to_vec())
    }
}

/// A boolean hypothesis on `[N]`, in one of the closed forms the classes in
/// scope use, or an explicit bit-vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// `f_k(x) = 1` iff `x >= k`.
    Threshold(usize),
    /// `1` exactly at `x = i`.
    Point(usize),
    AllOnes,
    AllZeros,
    /// Explicit values over `[N]`; entry `x - 1` is the label of `x`.
    Mask(Vec<bool>),
}

impl Hypothesis {
    pub fn eval(&self, x: usize) -> bool {
        match self {
            Hypothesis::Threshold(k) => x >= *k,
            Hypothesis::Point(i) => x == *i,
            Hypothesis::AllOnes => true,
            Hypothesis::AllZeros => false,
            Hypothesis::Mask(bits) => bits[x - 1],
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Hypothesis::Threshold(k) => format!("f_{k}"),
            Hypothesis::Point(i) => format!("1_{{x={i}}}"),
            Hypothesis::AllOnes => "all-ones".to_string(),
            Hypothesis::AllZeros => "all-zeros".to_string(),
            Hypothesis::Mask(_) => "mask".to_string(),
        }
    }
}

/// Which built-in family a class belongs to; drives fast paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    Thresholds,
    PointFunctions,
    FarOptimal,
    FullCube,
    Custom,
}

/// An enumerable finite hypothesis class over `[N]`.
#[derive(Clone, Debug)]
pub struct ConceptClass {
    name: String,
    kind: ClassKind,
    domain_size: usize,
    hypotheses: Vec<Hypothesis>,
}

impl ConceptClass {
    /// All thresholds `f_1, ..., f_N` over `[N]`. Note there is no all-zeros
    /// function here: `f_1` is all-ones, and nothing labels `x = N` with 0.
    pub fn thresholds(n: usize) -> Self {
        ConceptClass {
            name: format!("thresholds[{n}]"),
            kind: ClassKind::Thresholds,
            domain_size: n,
            hypotheses: (1..=n).map(Hypothesis::Threshold).collect(),
        }
    }

    /// Point functions `1_{x=1}, ..., 1_{x=N}`.
    pub fn point_functions(n: usize) -> Self {
        ConceptClass {
            name: format!("point-functions[{n}]"),
            kind: ClassKind::PointFunctions,
            domain_size: n,
            hypotheses: (1..=n).map(Hypothesis::Point).collect(),
        }
    }

    /// The class `{1_{x=i} : 1 < i <= N} ∪ {1_{x>1}}` on which the generic
    /// learner is far from optimal. Points come first (ordered by `i`), the
    /// threshold-like hypothesis is last.
    pub fn far_optimal(n: usize) -> Self {
        let mut hypotheses: Vec<Hypothesis> = (2..=n).map(Hypothesis::Point).collect();
        hypotheses.push(Hypothesis::Threshold(2));
        ConceptClass {
            name: format!("far-optimal[{n}]"),
            kind: ClassKind::FarOptimal,
            domain_size: n,
            hypotheses,
        }
    }

    /// The full cube `{0,1}^[N]`; hypothesis index read as a bit mask.
    pub fn full_cube(n: usize) -> Self {
        assert!(n <= 20, "full cube beyond 2^20 hypotheses is not desk scale");
        let hypotheses = (0u32..1 << n)
            .map(|code| Hypothesis::Mask((0..n).map(|b| code >> b & 1 == 1).collect()))
            .collect();
        ConceptClass {
            name: format!("cube[{n}]"),
            kind: ClassKind::FullCube,
            domain_size: n,
            hypotheses,
        }
    }

    pub fn from_hypotheses(name: &str, domain_size: usize, hypotheses: Vec<Hypothesis>) -> Self {
        ConceptClass {
            name: name.to_string(),
            kind: ClassKind::Custom,
            domain_size,
            hypotheses,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn size(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn hypothesis(&self, index: usize) -> &Hypothesis {
        &self.hypotheses[index]
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    /// Indices of hypotheses with empirical error 0 on `s`. For thresholds
    /// this is the contiguous interval computed in `O(m)`; everything else
    /// filters by definition.
    pub fn consistent_set(&self, s: &Sample) -> Vec<usize> {
        if self.kind == ClassKind::Thresholds {
            let (lo, hi) = self.consistent_interval(s).unwrap();
            return (lo..hi).collect();
        }
        (0..self.size())
            .filter(|&i| empirical_error(&self.hypotheses[i], s) == 0.0)
            .collect()
    }

    /// Threshold fast path: the consistent set is the half-open hypothesis
    /// index interval `[a, b)` with `a` the largest zero-labeled point (0 if
    /// none) and `b` the smallest one-labeled point (N if none). Empty means
    /// the sample is not realizable.
    pub fn consistent_interval(&self, s: &Sample) -> Option<(usize, usize)> {
        if self.kind != ClassKind::Thresholds {
            return None;
        }
        let mut max_zero = 0usize;
        let mut min_one = self.domain_size;
        for ex in s.examples() {
            if ex.y {
                min_one = min_one.min(ex.x);
            } else {
                max_zero = max_zero.max(ex.x);
            }
        }
        Some((max_zero, min_one))
    }
}

/// A marginal over `[N]` together with a target concept that labels it; the
/// target has true error 0 by construction.
#[derive(Clone, Debug)]
pub struct RealizableDistribution {
    marginal: Dist,
    target: Hypothesis,
}

impl RealizableDistribution {
    pub fn new(marginal: Dist, target: Hypothesis) -> Result<Self> {
        if let Hypothesis::Mask(bits) = &target {
            if bits.len() < marginal.len() {
                return Err(Error::Invalid(format!(
                    "mask covers {} points, domain has {}",
                    bits.len(),
                    marginal.len()
                )));
            }
        }
        Ok(RealizableDistribution { marginal, target })
    }

    pub fn uniform(n: usize, target: Hypothesis) -> Self {
        RealizableDistribution {
            marginal: Dist::uniform(n),
            target,
        }
    }

    pub fn n(&self) -> usize {
        self.marginal.len()
    }

    pub fn marginal(&self) -> &Dist {
        &self.marginal
    }

    pub fn target(&self) -> &Hypothesis {
        &self.target
    }

    pub fn label(&self, x: usize) -> bool {
        self.target.eval(x)
    }

    pub fn example_at(&self, x: usize) -> Example {
        Example {
            x,
            y: self.label(x),
        }
    }

    /// Domain points (1-based) with positive marginal mass.
    pub fn support(&self) -> Vec<usize> {
        self.marginal.support().into_iter().map(|i| i + 1).collect()
    }

    pub fn point_prob(&self, x: usize) -> f64 {
        self.marginal.prob(x - 1)
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(&self.marginal)
    }

    /// Draws an i.i.d. labeled sample of size `m`.
    pub fn draw_sample(&self, m: usize, sampler: &Sampler, rng: &mut ChaCha12Rng) -> Sample {
        let examples = (0..m)
            .map(|_| self.example_at(sampler.draw(rng) + 1))
            .collect();
        Sample { examples }
    }
}

/// Exact true error `err(h; D) = E 1[h(x) != y]` over the finite marginal.
pub fn true_error(h: &Hypothesis, d: &RealizableDistribution) -> f64 {
    (1..=d.n())
        .map(|x| {
            if h.eval(x) != d.label(x) {
                d.point_prob(x)
            } else {
                0.0
            }
        })
        .sum()
}

/// Empirical error of `h` on `s`.
pub fn empirical_error(h: &Hypothesis, s: &Sample) -> f64 {
    disagreement_count(h, s) as f64 / s.len() as f64
}

/// Number of examples `h` mislabels; exact integer form of the above.
pub fn disagreement_count(h: &Hypothesis, s: &Sample) -> usize {
    s.examples()
        .iter()
        .filter(|ex| h.eval(ex.x) != ex.y)
        .count()
}

/// Streams `supp(D^m)` as `(sample, probability)` pairs; probabilities are
/// the product weights and sum to 1. Refuses when `|supp|^m` exceeds the
/// enumeration budget.
pub fn enumerate_samples(
    d: &RealizableDistribution,
    m: usize,
    budget: u64,
) -> Result<SampleEnumerator<'_>> {
    if m == 0 {
        return Err(Error::EmptySample);
    }
    let support = d.support();
    let mut required: u128 = 1;
    for _ in 0..m {
        required = required.saturating_mul(support.len() as u128);
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }
    }
    Ok(SampleEnumerator {
        d,
        support,
        m,
        odometer: vec![0; m],
        done: false,
    })
}

pub struct SampleEnumerator<'a> {
    d: &'a RealizableDistribution,
    support: Vec<usize>,
    m: usize,
    odometer: Vec<usize>,
    done: bool,
}

impl<'a> SampleEnumerator<'a> {
    /// Number of entries the stream will yield.
    pub fn total_count(&self) -> u128 {
        (self.support.len() as u128).pow(self.m as u32)
    }
}

impl<'a> Iterator for SampleEnumerator<'a> {
    type Item = (Sample, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut prob = 1.0;
        let examples: Vec<Example> = self
            .odometer
            .iter()
            .map(|&slot| {
                let x = self.support[slot];
                prob *= self.d.point_prob(x);
                self.d.example_at(x)
            })
            .collect();
        // advance
        let mut pos = self.m;
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.odometer[pos] += 1;
            if self.odometer[pos] < self.support.len() {
                break;
            }
            self.odometer[pos] = 0;
        }
        Some((Sample { examples }, prob))
    }
}

/// The catalogue of built-in classes at a given domain size.
pub fn builtin_classes(n: usize) -> Vec<ConceptClass> {
    let mut classes = vec![
        ConceptClass::thresholds(n),
        ConceptClass::point_functions(n),
        ConceptClass::far_optimal(n),
    ];
    if n <= 16 {
        classes.push(ConceptClass::full_cube(n));
    }
    classes
}

/// VC dimension by brute force: the largest `k` such that some `k`-subset of
/// the domain is shattered.
pub fn vc_dimension(class: &ConceptClass) -> usize {
    let n = class.domain_size();
    let mut d = 0;
    for k in 1..=n {
        if k > 25 || (class.size() as f64) < (2u64.saturating_pow(k as u32)) as f64 {
            break;
        }
        if !exists_shattered_subset(class, k) {
            break;
        }
        d = k;
    }
    d
}

fn exists_shattered_subset(class: &ConceptClass, k: usize) -> bool {
    let n = class.domain_size();
    let mut subset: Vec<usize> = (1..=k).collect();
    loop {
        if is_shattered(class, &subset) {
            return true;
        }
        // next k-combination of [1, n]
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if subset[i] < n - (k - 1 - i) {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn is_shattered(class: &ConceptClass, subset: &[usize]) -> bool {
    let k = subset.len();
    let want = 1usize << k;
    let mut seen = vec![false; want];
    let mut found = 0;
    for h in class.hypotheses() {
        let mut code = 0usize;
        for (bit, &x) in subset.iter().enumerate() {
            if h.eval(x) {
                code |= 1 << bit;
            }
        }
        if !seen[code] {
            seen[code] = true;
            found += 1;
            if found == want {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_semantics() {
        let f3 = Hypothesis::Threshold(3);
        assert!(!f3.eval(2));
        assert!(f3.eval(3));
        assert!(f3.eval(7));
    }

    #[test]
    fn true_error_cases() {
        let d = RealizableDistribution::uniform(4, Hypothesis::Threshold(2));
        assert_eq!(true_error(&Hypothesis::Threshold(2), &d), 0.0);
        // complement of the target errs everywhere
        let complement = Hypothesis::Mask(vec![true, false, false, false]);
        assert_eq!(true_error(&complement, &d), 1.0);
        // f_3 vs target f_2 on uniform [4]: disagreement set {2} has mass 1/4
        assert!((true_error(&Hypothesis::Threshold(3), &d) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn empirical_error_cases() {
        let s = Sample::from_pairs(&[(1, false), (2, true), (3, true), (4, true)]).unwrap();
        assert_eq!(empirical_error(&Hypothesis::Threshold(2), &s), 0.0);
        assert_eq!(empirical_error(&Hypothesis::AllZeros, &s), 0.75);
        assert_eq!(empirical_error(&Hypothesis::Threshold(3), &s), 0.25);
    }

    #[test]
    fn consistent_interval_matches_brute_force() {
        // the interval fast path against definition-filtering, for every
        // sample (any labels, realizable or not) up to length 4
        for n in [2usize, 5, 6] {
            let class = ConceptClass::thresholds(n);
            let brute = |s: &Sample| -> Vec<usize> {
                (0..class.size())
                    .filter(|&i| empirical_error(class.hypothesis(i), s) == 0.0)
                    .collect()
            };
            let examples: Vec<(usize, bool)> = (1..=n)
                .flat_map(|x| [(x, false), (x, true)])
                .collect();
            for m in 1..=4usize {
                let mut odometer = vec![0usize; m];
                loop {
                    let pairs: Vec<(usize, bool)> =
                        odometer.iter().map(|&i| examples[i]).collect();
                    let s = Sample::from_pairs(&pairs).unwrap();
                    let fast = class.consistent_set(&s);
                    assert_eq!(fast, brute(&s), "{s:?}");
                    // the fast path is a contiguous index interval
                    assert!(fast.windows(2).all(|w| w[1] == w[0] + 1));

                    let mut pos = m;
                    let mut rolled = true;
                    while pos > 0 {
                        pos -= 1;
                        odometer[pos] += 1;
                        if odometer[pos] < examples.len() {
                            rolled = false;
                            break;
                        }
                        odometer[pos] = 0;
                    }
                    if rolled {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn all_zero_sample_with_max_point_is_unrealizable() {
        let class = ConceptClass::thresholds(4);
        let s = Sample::from_pairs(&[(4, false)]).unwrap();
        assert!(class.consistent_set(&s).is_empty());
    }

    #[test]
    fn builtin_class_consistency_against_brute_force() {
        // spec invariant: every built-in class passes for N <= 16, m <= 4;
        // scaled spot check here (full sweep lives in the acceptance suite)
        for n in [4usize, 6] {
            for class in builtin_classes(n) {
                let d = RealizableDistribution::uniform(n, class.hypothesis(0).clone());
                for (s, _w) in enumerate_samples(&d, 2, 1 << 20).unwrap() {
                    let brute: Vec<usize> = (0..class.size())
                        .filter(|&i| empirical_error(class.hypothesis(i), &s) == 0.0)
                        .collect();
                    assert_eq!(class.consistent_set(&s), brute);
                }
            }
        }
    }

    #[test]
    fn enumeration_weights_sum_to_one() {
        let marginal = Dist::new(vec![0.5, 0.3, 0.2]).unwrap();
        let d = RealizableDistribution::new(marginal, Hypothesis::Point(1)).unwrap();
        let entries: Vec<(Sample, f64)> = enumerate_samples(&d, 3, 1000).unwrap().collect();
        assert_eq!(entries.len(), 27);
        let total: f64 = entries.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-9);
        // independent product-measure oracle for one entry
        let (s, w) = &entries[5]; // odometer 0,1,2 -> x = 1,2,3
        assert_eq!(
            s.examples().iter().map(|e| e.x).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        assert!((w - 0.5 * 0.3 * 0.2).abs() < 1e-15);
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let d = RealizableDistribution::uniform(10, Hypothesis::AllOnes);
        match enumerate_samples(&d, 9, 1000) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert!(required > 1000);
                assert_eq!(budget, 1000);
            }
            Err(other) => panic!("expected budget error, got {other:?}"),
            Ok(_) => panic!("budget was not enforced"),
        }
    }

    #[test]
    fn single_point_support_enumerates_once() {
        let marginal = Dist::new(vec![0.0, 1.0, 0.0]).unwrap();
        let d = RealizableDistribution::new(marginal, Hypothesis::AllOnes).unwrap();
        let entries: Vec<(Sample, f64)> = enumerate_samples(&d, 4, 100).unwrap().collect();
        assert_eq!(entries.len(), 1);
        assert!((entries[0].1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vc_dimensions_of_builtins() {
        assert_eq!(vc_dimension(&ConceptClass::thresholds(16)), 1);
        assert_eq!(vc_dimension(&ConceptClass::point_functions(12)), 1);
        assert_eq!(vc_dimension(&ConceptClass::full_cube(5)), 5);
    }

    #[test]
    fn class_cardinalities() {
        assert_eq!(ConceptClass::thresholds(4).size(), 4);
        assert_eq!(ConceptClass::point_functions(5).size(), 5);
        assert_eq!(ConceptClass::far_optimal(7).size(), 7);
        assert_eq!(ConceptClass::full_cube(3).size(), 8);
    }
}
