use serde::Serialize;

use crate::concepts::{
    empirical_error, enumerate_samples, true_error, ConceptClass, RealizableDistribution,
};
use crate::info_core::{entropy, mutual_information};
use crate::learners::{
    FarOptimalErm, GenericLearner, KernelDist, LearnerKernel, NetLearner, SharpnessLearner,
};
use crate::rng::{bootstrap_mean_stderr, rng_for};
use crate::{Dist, Error, Joint, Result};

use super::mi::{exact_mi, signature_analysis};
use super::{resolve_mi, MiMethod};

/// Lazily cached exact true errors per hypothesis index.
struct ErrorCache<'a> {
    class: &'a ConceptClass,
    d: &'a RealizableDistribution,
    cache: Vec<Option<f64>>,
}

impl<'a> ErrorCache<'a> {
    fn new(class: &'a ConceptClass, d: &'a RealizableDistribution) -> Self {
        ErrorCache {
            class,
            d,
            cache: vec![None; class.size()],
        }
    }

    fn get(&mut self, h: usize) -> f64 {
        if let Some(v) = self.cache[h] {
            return v;
        }
        let v = true_error(self.class.hypothesis(h), self.d);
        self.cache[h] = Some(v);
        v
    }
}

/// Monte Carlo check of the information generalization bound: frequency of
/// `|empirical - true| > eps` against `(d + 1) / (2 m eps^2 - 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct GenGapReport {
    pub learner: String,
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    pub d_bits: f64,
    pub d_method: MiMethod,
    pub bound: f64,
    /// The realizable-case comparison value `(d + 1) / (m eps - 1)`;
    /// reported, never asserted (its constant is unspecified).
    pub realizable_bound: f64,
    pub violation_freq: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl GenGapReport {
    pub fn holds(&self, stderr_slack: f64) -> bool {
        self.violation_freq <= self.bound + stderr_slack * self.stderr
    }
}

pub fn generalization_experiment(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    eps: f64,
    trials: u64,
    seed: u64,
    budget: u64,
) -> Result<GenGapReport> {
    let denom = 2.0 * m as f64 * eps * eps - 1.0;
    if denom <= 0.0 {
        return Err(Error::Invalid(format!(
            "need 2 m eps^2 > 1; got m = {m}, eps = {eps}"
        )));
    }
    let info = resolve_mi(l, d, m, budget)?;
    let bound = (info.mi_bits + 1.0) / denom;
    let realizable_denom = m as f64 * eps - 1.0;
    let realizable_bound = if realizable_denom > 0.0 {
        (info.mi_bits + 1.0) / realizable_denom
    } else {
        f64::INFINITY
    };

    let sampler = d.sampler();
    let mut rng = rng_for(seed, 0);
    let mut errors = ErrorCache::new(l.class(), d);
    let mut hits: Vec<f64> = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let s = d.draw_sample(m, &sampler, &mut rng);
        let h = l.sample_hypothesis(&s, &mut rng)?;
        let gap = (empirical_error(l.class().hypothesis(h), &s) - errors.get(h)).abs();
        hits.push(if gap > eps { 1.0 } else { 0.0 });
    }
    let violation_freq = hits.iter().sum::<f64>() / trials as f64;
    let mut boot_rng = rng_for(seed, 1);
    let stderr = bootstrap_mean_stderr(&hits, 200, &mut boot_rng);

    Ok(GenGapReport {
        learner: l.name().to_string(),
        n: d.n(),
        m,
        eps,
        d_bits: info.mi_bits,
        d_method: info.method,
        bound,
        realizable_bound,
        violation_freq,
        stderr,
        trials,
        seed,
    })
}

/// Exact stability profile: per-coordinate information, replace-one total
/// variation, and the expected generalization gap, with the three
/// inequalities they must satisfy.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub learner: String,
    pub n: usize,
    pub m: usize,
    pub d_bits: f64,
    pub per_coord_mi: Vec<f64>,
    /// `E_z dTV(A(S^{(i,z)}), A(S))` per coordinate.
    pub replace_one_tv: Vec<f64>,
    pub avg_sqrt_coord_mi: f64,
    pub gap: f64,
    pub sqrt_d_over_m: f64,
}

impl StabilityReport {
    /// `(1/m) sum_i sqrt(I(A(S); S_i)) <= sqrt(d/m)`.
    pub fn coordinate_mean_holds(&self, tol: f64) -> bool {
        self.avg_sqrt_coord_mi <= self.sqrt_d_over_m + tol
    }

    /// `sqrt(I(A(S); S_i)) >= E_z dTV(A(S^{(i,z)}), A(S))` per coordinate.
    pub fn replace_one_holds(&self, tol: f64) -> bool {
        self.per_coord_mi
            .iter()
            .zip(&self.replace_one_tv)
            .all(|(&mi, &tv)| mi.max(0.0).sqrt() + tol >= tv)
    }

    /// Expected gap at most `sqrt(d/m)`.
    pub fn gap_bound_holds(&self, tol: f64) -> bool {
        self.gap <= self.sqrt_d_over_m + tol
    }
}

pub fn stability_profile(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    budget: u64,
) -> Result<StabilityReport> {
    let d_bits = exact_mi(l, d, m, budget)?.mi_bits;

    let entries: Vec<(crate::concepts::Sample, f64, KernelDist)> =
        enumerate_samples(d, m, budget)?
            .map(|(s, w)| l.kernel(&s).map(|k| (s, w, k)))
            .collect::<Result<Vec<_>>>()?;

    let support = d.support();
    let slot_of = |x: usize| support.binary_search(&x).expect("support point");
    let cols = l.class().size();

    // per-coordinate joints over (example value, hypothesis)
    let mut per_coord_mi = Vec::with_capacity(m);
    for i in 0..m {
        let mut mass = vec![0.0; support.len() * cols];
        for (s, w, kernel) in &entries {
            let row = slot_of(s.example(i).x);
            for (h, p) in kernel.iter() {
                mass[row * cols + h] += w * p;
            }
        }
        let joint = Joint::new_unchecked(support.len(), cols, mass);
        per_coord_mi.push(mutual_information(&joint).value());
    }

    // replace-one expected total variation per coordinate
    let mut replace_one_tv = Vec::with_capacity(m);
    for i in 0..m {
        let mut expectation = 0.0;
        for (s, w, kernel) in &entries {
            for &x in &support {
                let p_z = d.point_prob(x);
                if p_z == 0.0 {
                    continue;
                }
                let replaced = s.replace(i, d.example_at(x));
                let replaced_kernel = l.kernel(&replaced)?;
                expectation += w * p_z * kernel.tv(&replaced_kernel);
            }
        }
        replace_one_tv.push(expectation);
    }

    // expected generalization gap, exactly
    let mut errors = ErrorCache::new(l.class(), d);
    let mut gap = 0.0;
    for (s, w, kernel) in &entries {
        for (h, p) in kernel.iter() {
            gap += w * p * (errors.get(h) - empirical_error(l.class().hypothesis(h), s));
        }
    }

    let avg_sqrt_coord_mi = per_coord_mi.iter().map(|&v| v.max(0.0).sqrt()).sum::<f64>() / m as f64;

    Ok(StabilityReport {
        learner: l.name().to_string(),
        n: d.n(),
        m,
        d_bits,
        per_coord_mi,
        replace_one_tv,
        avg_sqrt_coord_mi,
        gap,
        sqrt_d_over_m: (d_bits.max(0.0) / m as f64).sqrt(),
    })
}

/// PAC-Bayes verification with prior `P = P_h` (the exact output marginal)
/// and posterior `Q = P_{h|S}` per sampled `S`. The KL term in the
/// McAllester bound is evaluated in nats.
#[derive(Clone, Debug, Serialize)]
pub struct PacBayesReport {
    pub learner: String,
    pub n: usize,
    pub m: usize,
    pub delta: f64,
    pub eps: f64,
    pub d_bits: f64,
    pub bayes_violation_freq: f64,
    pub bayes_stderr: f64,
    pub info_bound_applicable: bool,
    pub info_bound: f64,
    pub info_violation_freq: f64,
    pub info_stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl PacBayesReport {
    pub fn bayes_bound_holds(&self, stderr_slack: f64) -> bool {
        self.bayes_violation_freq <= self.delta + stderr_slack * self.bayes_stderr
    }

    pub fn info_bound_holds(&self, stderr_slack: f64) -> bool {
        !self.info_bound_applicable
            || self.info_violation_freq <= self.info_bound + stderr_slack * self.info_stderr
    }
}

pub fn pac_bayes_check(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    delta: f64,
    eps: f64,
    trials: u64,
    seed: u64,
    budget: u64,
) -> Result<PacBayesReport> {
    let analysis = signature_analysis(l, d, m, budget)?;
    let marginal = analysis.marginal;
    let d_bits = analysis.mi_bits;

    let sampler = d.sampler();
    let mut rng = rng_for(seed, 0);
    let mut errors = ErrorCache::new(l.class(), d);
    let mut v12: Vec<f64> = Vec::with_capacity(trials as usize);
    let mut v13: Vec<f64> = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let s = d.draw_sample(m, &sampler, &mut rng);
        let kernel = l.kernel(&s)?;
        let mut kl_nats = 0.0;
        let mut gap = 0.0;
        for (h, p) in kernel.iter() {
            if p > 0.0 {
                kl_nats += p * (p / marginal[h]).ln();
                gap += p * (errors.get(h) - empirical_error(l.class().hypothesis(h), &s));
            }
        }
        let bound12 = ((kl_nats + (m as f64 / delta).ln()) / m as f64).sqrt();
        v12.push(if gap > bound12 { 1.0 } else { 0.0 });
        v13.push(if gap > eps { 1.0 } else { 0.0 });
    }
    let freq12 = v12.iter().sum::<f64>() / trials as f64;
    let freq13 = v13.iter().sum::<f64>() / trials as f64;
    let mut boot_rng = rng_for(seed, 1);
    let stderr12 = bootstrap_mean_stderr(&v12, 200, &mut boot_rng);
    let stderr13 = bootstrap_mean_stderr(&v13, 200, &mut boot_rng);

    let applicable =
        m as f64 >= 5.0 * (d_bits + 1.0) / (eps * eps) * ((d_bits + 1.0) / eps).ln().max(0.0);

    Ok(PacBayesReport {
        learner: l.name().to_string(),
        n: d.n(),
        m,
        delta,
        eps,
        d_bits,
        bayes_violation_freq: freq12,
        bayes_stderr: stderr12,
        info_bound_applicable: applicable,
        info_bound: (d_bits + 1.0) / (m as f64 * eps * eps),
        info_violation_freq: freq13,
        info_stderr: stderr13,
        trials,
        seed,
    })
}

/// The far-from-optimal comparison: under the heavy-at-1 distribution
/// labeled by `1_{x>1}`, the generic learner reveals `> log2(N)/(2e) - 1`
/// bits while the dedicated deterministic ERM stays under
/// `1 + log2(m + 2)`.
#[derive(Clone, Debug, Serialize)]
pub struct FarOptimalReport {
    pub n: usize,
    pub m: usize,
    pub generic_mi: f64,
    pub erm_mi: f64,
    pub generic_lower_bound: f64,
    pub erm_upper_bound: f64,
    /// Small domains sit outside the asymptotic regime; the report is
    /// emitted either way, assertions only apply in regime.
    pub in_regime: bool,
}

impl FarOptimalReport {
    pub fn generic_bound_holds(&self, tol: f64) -> bool {
        self.generic_mi > self.generic_lower_bound - tol
    }

    pub fn erm_bound_holds(&self, tol: f64) -> bool {
        self.erm_mi <= self.erm_upper_bound + tol
    }
}

pub fn far_optimal_comparison(n: usize, m: usize, budget: u64) -> Result<FarOptimalReport> {
    if n < 3 || m < 2 {
        return Err(Error::Invalid(format!(
            "far-optimal comparison needs n >= 3, m >= 2; got {n}, {m}"
        )));
    }
    let mut weights = vec![1.0 / (m as f64 * (n as f64 - 1.0)); n];
    weights[0] = 1.0 - 1.0 / m as f64;
    let d = RealizableDistribution::new(
        Dist::normalized(weights)?,
        crate::concepts::Hypothesis::Threshold(2),
    )?;

    let generic = GenericLearner::new(ConceptClass::far_optimal(n));
    let erm = FarOptimalErm::new(n);
    let generic_mi = signature_analysis(&generic, &d, m, budget)?.mi_bits;
    let erm_mi = signature_analysis(&erm, &d, m, budget)?.mi_bits;

    Ok(FarOptimalReport {
        n,
        m,
        generic_mi,
        erm_mi,
        generic_lower_bound: (n as f64).log2() / (2.0 * std::f64::consts::E) - 1.0,
        erm_upper_bound: 1.0 + (m as f64 + 2.0).log2(),
        in_regime: n >= 16,
    })
}

/// Monte Carlo profile of the sharpness learner: the frequency of true
/// error at least 1/2 and the plug-in entropy of the output.
#[derive(Clone, Debug, Serialize)]
pub struct SharpnessReport {
    pub n: usize,
    pub m: usize,
    pub set_count: usize,
    pub cover_measure_estimate: f64,
    pub freq_high_error: f64,
    pub freq_stderr: f64,
    pub entropy_plugin_bits: f64,
    pub entropy_stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

pub fn sharpness_experiment(
    learner: &SharpnessLearner,
    trials: u64,
    seed: u64,
) -> Result<SharpnessReport> {
    use rand::Rng;
    let cover = learner.cover();
    let (n, m) = (cover.n, cover.m);
    let categories = cover.set_count() + 1;
    let all_ones = cover.set_count();

    let mut rng = rng_for(seed, 0);
    let mut outcome: Vec<u16> = Vec::with_capacity(trials as usize);
    let mut points = vec![0usize; m];
    for _ in 0..trials {
        for slot in points.iter_mut() {
            *slot = rng.random_range(1..=n);
        }
        let output = cover.covering_set(&points).unwrap_or(all_ones);
        outcome.push(output as u16);
    }

    let mut counts = vec![0u64; categories];
    for &c in &outcome {
        counts[c as usize] += 1;
    }
    let freq_high_error = 1.0 - counts[all_ones] as f64 / trials as f64;
    let entropy_plugin_bits = plugin_entropy(&counts, trials);

    // one bootstrap pass feeds both standard errors
    let mut boot_rng = rng_for(seed, 1);
    let resamples = 200;
    let (mut f_sum, mut f_sq, mut h_sum, mut h_sq) = (0.0, 0.0, 0.0, 0.0);
    let mut re_counts = vec![0u64; categories];
    for _ in 0..resamples {
        re_counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..outcome.len() {
            let pick = outcome[boot_rng.random_range(0..outcome.len())];
            re_counts[pick as usize] += 1;
        }
        let f = 1.0 - re_counts[all_ones] as f64 / trials as f64;
        let h = plugin_entropy(&re_counts, trials);
        f_sum += f;
        f_sq += f * f;
        h_sum += h;
        h_sq += h * h;
    }
    let r = resamples as f64;
    let freq_stderr = (f_sq / r - (f_sum / r).powi(2)).max(0.0).sqrt();
    let entropy_stderr = (h_sq / r - (h_sum / r).powi(2)).max(0.0).sqrt();

    Ok(SharpnessReport {
        n,
        m,
        set_count: cover.set_count(),
        cover_measure_estimate: cover.measure_estimate,
        freq_high_error,
        freq_stderr,
        entropy_plugin_bits,
        entropy_stderr,
        trials,
        seed,
    })
}

fn plugin_entropy(counts: &[u64], total: u64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum()
}

/// The net learner's exact output entropy plus Monte Carlo stopping-level
/// frequencies against `Pr[K = k+1] <= (m+1)^{-(k-1)}`.
#[derive(Clone, Debug, Serialize)]
pub struct NetReport {
    pub n: usize,
    pub m: usize,
    pub vc_dim: usize,
    pub level_sizes: Vec<usize>,
    pub output_entropy_bits: f64,
    pub entropy_bound: f64,
    /// Empirical `Pr[K = level]` indexed from level 1.
    pub level_freqs: Vec<f64>,
    pub level_stderrs: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

impl NetReport {
    pub fn entropy_bound_holds(&self, tol: f64) -> bool {
        self.output_entropy_bits <= self.entropy_bound + tol
    }

    /// `Pr[K = k+1] <= (m+1)^{-(k-1)} + slack * stderr` for every `k >= 1`.
    pub fn stopping_tail_holds(&self, stderr_slack: f64) -> bool {
        self.level_freqs.iter().enumerate().skip(1).all(|(idx, &freq)| {
            let k = idx; // level = idx + 1 = k + 1
            let bound = (self.m as f64 + 1.0).powi(-(k as i32 - 1));
            freq <= bound + stderr_slack * self.level_stderrs[idx]
        })
    }
}

pub fn net_stopping_experiment(
    learner: &NetLearner,
    d: &RealizableDistribution,
    m: usize,
    trials: u64,
    seed: u64,
    budget: u64,
) -> Result<NetReport> {
    let analysis = signature_analysis(learner, d, m, budget)?;
    let output_entropy_bits = entropy(&Dist::new_unchecked(analysis.marginal)).value();
    let vc = learner.vc_dim();
    let entropy_bound = 4.0 * vc as f64 * (m as f64 + 1.0).log2() + 4.0;

    let levels = learner.hierarchy().levels.len();
    let sampler = d.sampler();
    let mut rng = rng_for(seed, 0);
    let mut stops: Vec<u8> = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let s = d.draw_sample(m, &sampler, &mut rng);
        let (level, _) = learner.stop_level(&s)?;
        stops.push(level as u8);
    }
    let mut level_freqs = vec![0.0; levels];
    for &level in &stops {
        level_freqs[level as usize - 1] += 1.0;
    }
    for freq in level_freqs.iter_mut() {
        *freq /= trials as f64;
    }
    let mut boot_rng = rng_for(seed, 1);
    let level_stderrs: Vec<f64> = (0..levels)
        .map(|idx| {
            let indicator: Vec<f64> = stops
                .iter()
                .map(|&level| if level as usize == idx + 1 { 1.0 } else { 0.0 })
                .collect();
            bootstrap_mean_stderr(&indicator, 200, &mut boot_rng)
        })
        .collect();

    Ok(NetReport {
        n: d.n(),
        m,
        vc_dim: vc,
        level_sizes: learner.hierarchy().levels.iter().map(|l| l.len()).collect(),
        output_entropy_bits,
        entropy_bound,
        level_freqs,
        level_stderrs,
        trials,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{Hypothesis, Sample};
    use crate::learners::{build_cover, SigKey};

    struct TargetLearner {
        class: ConceptClass,
        target_idx: usize,
    }

    impl LearnerKernel for TargetLearner {
        fn name(&self) -> &str {
            "target-constant"
        }
        fn class(&self) -> &ConceptClass {
            &self.class
        }
        fn kernel(&self, _s: &Sample) -> Result<KernelDist> {
            Ok(KernelDist::Point(self.target_idx))
        }
        fn signature_key(&self, _s: &Sample) -> Result<Option<SigKey>> {
            Ok(Some(vec![self.target_idx as u32]))
        }
        fn signature_table(
            &self,
            _d: &RealizableDistribution,
            _m: usize,
        ) -> Result<Option<crate::learners::SigTable>> {
            Ok(Some(crate::learners::SigTable {
                entries: vec![(1.0, KernelDist::Point(self.target_idx))],
            }))
        }
    }

    #[test]
    fn constant_target_learner_never_violates() {
        let class = ConceptClass::point_functions(5);
        let learner = TargetLearner {
            class,
            target_idx: 2,
        };
        let d = RealizableDistribution::uniform(5, Hypothesis::Point(3));
        let report =
            generalization_experiment(&learner, &d, 10, 0.3, 2_000, 5, 1 << 24).unwrap();
        assert_eq!(report.d_bits, 0.0);
        // the target never errs, so |emp - true| = 0 every trial
        assert_eq!(report.violation_freq, 0.0);
        assert!(report.holds(3.0));
    }

    #[test]
    fn vacuous_bound_passes_trivially() {
        let learner = GenericLearner::new(ConceptClass::point_functions(6));
        let d = RealizableDistribution::uniform(6, Hypothesis::Point(1));
        // 2 m eps^2 barely above 1 makes the bound exceed 1
        let report =
            generalization_experiment(&learner, &d, 3, 0.45, 2_000, 5, 1 << 24).unwrap();
        assert!(report.bound >= 1.0);
        assert!(report.holds(3.0));
    }

    #[test]
    fn gen_gap_rejects_degenerate_eps() {
        let learner = GenericLearner::new(ConceptClass::point_functions(6));
        let d = RealizableDistribution::uniform(6, Hypothesis::Point(1));
        assert!(generalization_experiment(&learner, &d, 2, 0.1, 100, 5, 1 << 24).is_err());
    }

    #[test]
    fn stability_constant_learner_is_flat() {
        let class = ConceptClass::point_functions(4);
        let learner = TargetLearner {
            class,
            target_idx: 0,
        };
        let d = RealizableDistribution::uniform(4, Hypothesis::Point(1));
        let report = stability_profile(&learner, &d, 2, 1 << 24).unwrap();
        assert!(report.d_bits.abs() < 1e-12);
        for (&mi, &tv) in report.per_coord_mi.iter().zip(&report.replace_one_tv) {
            assert!(mi.abs() < 1e-12);
            assert!(tv.abs() < 1e-12);
        }
        // the target-constant learner has no generalization gap at all
        assert!(report.gap.abs() < 1e-12);
        assert!(report.coordinate_mean_holds(1e-9));
        assert!(report.replace_one_holds(1e-9));
        assert!(report.gap_bound_holds(1e-9));
    }

    /// A learner that reveals the whole sample: per-coordinate information
    /// is exactly one bit per uniform binary coordinate.
    struct RevealingLearner {
        class: ConceptClass,
    }

    impl LearnerKernel for RevealingLearner {
        fn name(&self) -> &str {
            "revealing"
        }
        fn class(&self) -> &ConceptClass {
            &self.class
        }
        fn kernel(&self, s: &Sample) -> Result<KernelDist> {
            let code = s
                .examples()
                .iter()
                .enumerate()
                .map(|(i, ex)| ((ex.x - 1) & 1) << i)
                .sum();
            Ok(KernelDist::Point(code))
        }
        fn signature_key(&self, s: &Sample) -> Result<Option<SigKey>> {
            self.kernel(s).map(|k| match k {
                KernelDist::Point(h) => Some(vec![h as u32]),
                _ => None,
            })
        }
    }

    #[test]
    fn stability_revealing_learner_has_unit_coordinates() {
        let m = 3;
        let class = ConceptClass::full_cube(m);
        let learner = RevealingLearner { class };
        let d = RealizableDistribution::uniform(2, Hypothesis::AllOnes);
        let report = stability_profile(&learner, &d, m, 1 << 24).unwrap();
        for &mi in &report.per_coord_mi {
            assert!((mi - 1.0).abs() < 1e-9, "coordinate mi = {mi}");
        }
        assert!((report.d_bits - m as f64).abs() < 1e-9);
        assert!(report.coordinate_mean_holds(1e-9));
        assert!(report.replace_one_holds(1e-9));
    }

    #[test]
    fn pac_bayes_constant_learner() {
        let class = ConceptClass::point_functions(5);
        let learner = TargetLearner {
            class,
            target_idx: 2,
        };
        let d = RealizableDistribution::uniform(5, Hypothesis::Point(3));
        let report =
            pac_bayes_check(&learner, &d, 20, 0.1, 0.3, 2_000, 11, 1 << 24).unwrap();
        // KL term is 0 and the gap is 0: no violations of either theorem
        assert_eq!(report.bayes_violation_freq, 0.0);
        assert!(report.bayes_bound_holds(3.0));
        assert!(report.info_bound_holds(3.0));
    }

    #[test]
    fn pac_bayes_generic_point_functions() {
        let learner = GenericLearner::new(ConceptClass::point_functions(8));
        let d = RealizableDistribution::uniform(8, Hypothesis::Point(1));
        let report =
            pac_bayes_check(&learner, &d, 40, 0.1, 0.25, 20_000, 11, 1 << 24).unwrap();
        assert!(report.bayes_bound_holds(3.0), "freq = {}", report.bayes_violation_freq);
        assert!(report.info_bound_holds(3.0));
    }

    #[test]
    fn far_optimal_out_of_regime_is_flagged() {
        let report = far_optimal_comparison(4, 8, 1 << 24).unwrap();
        assert!(!report.in_regime);
        // the deterministic ERM is constant under this target
        assert!(report.erm_mi.abs() < 1e-12);
    }

    #[test]
    fn far_optimal_in_regime_bounds() {
        let report = far_optimal_comparison(64, 8, 1 << 24).unwrap();
        assert!(report.in_regime);
        assert!(report.generic_bound_holds(1e-9), "{report:?}");
        assert!(report.erm_bound_holds(1e-9));
    }

    #[test]
    fn sharpness_experiment_smoke() {
        let cover = build_cover(2000, 5, 3, 20_000).unwrap();
        let learner = SharpnessLearner::new(cover);
        let report = sharpness_experiment(&learner, 20_000, 9).unwrap();
        // the high-error frequency tracks the cover's union measure
        assert!(
            (report.freq_high_error - report.cover_measure_estimate).abs() < 0.05,
            "{report:?}"
        );
        assert!(report.entropy_plugin_bits <= 5.0);
        assert!(report.freq_high_error >= 1.0 / (2.0 * 5.0));
    }

    #[test]
    fn net_experiment_smoke() {
        let class = ConceptClass::thresholds(16);
        let d_x = Dist::uniform(16);
        let learner = NetLearner::new(class, &d_x, 3).unwrap();
        let d = RealizableDistribution::uniform(16, Hypothesis::Threshold(8));
        let report = net_stopping_experiment(&learner, &d, 3, 20_000, 13, 1 << 24).unwrap();
        assert!(report.entropy_bound_holds(1e-9));
        assert!(report.stopping_tail_holds(3.0), "{report:?}");
        let freq_sum: f64 = report.level_freqs.iter().sum();
        assert!((freq_sum - 1.0).abs() < 1e-9);
    }
}
