//! Closed-form signature enumeration.
//!
//! A signature is an equivalence class of samples on which a learner's
//! kernel is constant. For threshold learners the signature of a sample is
//! the pair (largest zero-labeled point, smallest one-labeled point); its
//! probability under `D^m` is a difference of CDF powers, so the whole
//! table costs `O(#signatures)` with no sample enumeration.

use crate::concepts::{Hypothesis, RealizableDistribution};
use crate::learners::{KernelDist, SigTable};
use crate::{Error, Result};

/// One threshold signature class, named by its consistent hypothesis-index
/// interval `[lo, hi)`: `lo` is the largest zero-labeled point (0 when
/// none), `hi` the smallest one-labeled point (N when none, and samples
/// whose smallest one-labeled point *is* N fold into the same class — the
/// kernel cannot tell them apart).
#[derive(Clone, Copy, Debug)]
pub struct ThresholdSig {
    pub lo: usize,
    pub hi: usize,
    pub mass: f64,
}

#[derive(Clone, Debug)]
pub struct ThresholdSignatures {
    pub entries: Vec<ThresholdSig>,
}

/// Enumerates the realizable threshold signatures of `D^m` with exact
/// masses. Requires a threshold target.
pub fn threshold_signatures(
    d: &RealizableDistribution,
    m: usize,
    n: usize,
) -> Result<ThresholdSignatures> {
    let k = match d.target() {
        Hypothesis::Threshold(k) => *k,
        other => {
            return Err(Error::Invalid(format!(
                "threshold signatures need a threshold target, got {}",
                other.describe()
            )))
        }
    };
    if k < 1 || k > n {
        return Err(Error::Invalid(format!(
            "threshold target f_{k} lies outside the class on [{n}]"
        )));
    }
    if m == 0 {
        return Err(Error::EmptySample);
    }

    // cdf[x] = marginal mass of [1, x]
    let mut cdf = vec![0.0; n + 1];
    for x in 1..=n {
        cdf[x] = cdf[x - 1] + d.point_prob(x);
    }

    // Zero-labeled candidates below k (plus the "none" value 0) and
    // one-labeled candidates at or above k, restricted to the support.
    let mut zeros: Vec<usize> = vec![0];
    let mut ones: Vec<usize> = Vec::new();
    for x in d.support() {
        if x < k {
            zeros.push(x);
        } else {
            ones.push(x);
        }
    }

    // P(max_zero <= a, min_one >= b) = P(no example in the open gap (a, b))
    let gap_mass = |a: usize, b: Option<usize>| -> f64 {
        match b {
            Some(b) => (cdf[a] + 1.0 - cdf[b - 1]).powi(m as i32),
            None => cdf[a].powi(m as i32),
        }
    };

    // (max-zero, min-one) cells; the pair (a, Some(n)) shares its consistent
    // interval with (a, None), so those two cells merge
    let mut entries = Vec::new();
    for (zi, &a) in zeros.iter().enumerate() {
        let prev_a = if zi > 0 { Some(zeros[zi - 1]) } else { None };
        let mut tail_mass = 0.0; // accumulates cells with interval end = n
        for (oi, &b) in ones.iter().enumerate() {
            let next_b = ones.get(oi + 1).copied();
            let mut mass = gap_mass(a, Some(b)) - gap_mass(a, next_b);
            if let Some(pa) = prev_a {
                mass -= gap_mass(pa, Some(b)) - gap_mass(pa, next_b);
            }
            if b == n {
                tail_mass += mass.max(0.0);
            } else {
                push_sig(&mut entries, a, b, mass);
            }
        }
        let mut none_mass = gap_mass(a, None);
        if let Some(pa) = prev_a {
            none_mass -= gap_mass(pa, None);
        }
        tail_mass += none_mass.max(0.0);
        push_sig(&mut entries, a, n, tail_mass);
    }
    Ok(ThresholdSignatures { entries })
}

fn push_sig(entries: &mut Vec<ThresholdSig>, lo: usize, hi: usize, mass: f64) {
    if mass <= 1e-15 {
        return;
    }
    debug_assert!(lo < hi, "realizable signature [{lo}, {hi}) must be nonempty");
    entries.push(ThresholdSig { lo, hi, mass });
}

/// Visits the threshold signatures *reachable by some sample of size m*
/// without computing masses: `(lo, hi)` consistent intervals. Used by the
/// prior-bound sweep, where only the set of realizable kernels matters.
pub fn visit_threshold_intervals(
    d: &RealizableDistribution,
    m: usize,
    n: usize,
    mut visit: impl FnMut(usize, usize),
) -> Result<()> {
    let k = match d.target() {
        Hypothesis::Threshold(k) => *k,
        other => {
            return Err(Error::Invalid(format!(
                "threshold signatures need a threshold target, got {}",
                other.describe()
            )))
        }
    };
    let mut zeros: Vec<usize> = Vec::new();
    let mut ones: Vec<usize> = Vec::new();
    for x in d.support() {
        if x < k {
            zeros.push(x);
        } else {
            ones.push(x);
        }
    }
    for &b in &ones {
        visit(0, b); // one-labeled examples only
    }
    for &a in &zeros {
        visit(a, n); // no one-labeled example below n
        if m >= 2 {
            for &b in &ones {
                if b < n {
                    visit(a, b);
                }
            }
        }
    }
    Ok(())
}

/// Closed-form signature table for the generic learner on point functions.
/// The kernel depends on the sample only through the set of distinct points
/// seen: a seen target pins the output, anything else leaves the uniform
/// distribution over the unseen points plus the target. Seen-set masses come
/// from inclusion-exclusion over subsets of the support, so this scales to
/// any sample size (the cost is `3^|supp|`).
pub fn point_function_generic_table(
    d: &RealizableDistribution,
    m: usize,
    class_size: usize,
) -> Option<SigTable> {
    let target = match d.target() {
        Hypothesis::Point(j) => *j,
        _ => return None,
    };
    let support = d.support();
    let s = support.len();
    if s > 16 {
        return None;
    }

    // subset_mass[mask]^m = P(every example lands inside the subset)
    let mut covered_pow = vec![0.0; 1 << s];
    for mask in 0..1usize << s {
        let mass: f64 = (0..s)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| d.point_prob(support[i]))
            .sum();
        covered_pow[mask] = mass.powi(m as i32);
    }

    let mut entries: Vec<(f64, KernelDist)> = Vec::new();
    let mut target_mass = 0.0;
    for seen in 1..1usize << s {
        // P(seen set = exactly this subset), by inclusion-exclusion
        let mut mass = 0.0;
        let mut sub = seen;
        loop {
            let sign = if (seen.count_ones() - sub.count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            mass += sign * covered_pow[sub];
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & seen;
        }
        if mass <= 1e-15 {
            continue;
        }
        let seen_points: Vec<usize> = (0..s)
            .filter(|&i| seen >> i & 1 == 1)
            .map(|i| support[i])
            .collect();
        if seen_points.contains(&target) {
            target_mass += mass;
        } else {
            let consistent: Vec<usize> = (1..=class_size)
                .filter(|x| !seen_points.contains(x))
                .map(|x| x - 1)
                .collect();
            entries.push((mass, KernelDist::uniform_over(consistent)));
        }
    }
    if target_mass > 0.0 {
        entries.push((target_mass, KernelDist::Point(target - 1)));
    }
    Some(SigTable { entries })
}

/// Closed-form signature table for the generic learner on the far-optimal
/// class under the distribution labeled by `1_{x>1}`. Signature classes:
/// all examples at 1; exactly one distinct point above 1; at least two
/// distinct points above 1.
pub fn far_optimal_generic_table(
    d: &RealizableDistribution,
    m: usize,
    class_size: usize,
) -> SigTable {
    let thr = class_size - 1;
    let p1 = d.point_prob(1);
    let all_zero = p1.powi(m as i32);

    let mut entries = Vec::new();
    if all_zero > 0.0 {
        // every hypothesis is consistent with an all-(1,0) sample
        entries.push((all_zero, KernelDist::uniform_range(0, class_size)));
    }
    let mut single_total = 0.0;
    for x in d.support() {
        if x == 1 {
            continue;
        }
        // all examples in {1, x}, at least one at x
        let mass = (p1 + d.point_prob(x)).powi(m as i32) - all_zero;
        if mass > 0.0 {
            single_total += mass;
            let point_idx = x - 2;
            entries.push((
                mass,
                KernelDist::sparse(vec![point_idx, thr], vec![0.5, 0.5]),
            ));
        }
    }
    let multi = 1.0 - all_zero - single_total;
    if multi > 1e-15 {
        entries.push((multi, KernelDist::Point(thr)));
    }
    SigTable { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{enumerate_samples, ConceptClass, RealizableDistribution};
    use crate::learners::{GenericLearner, LearnerKernel};
    use crate::Dist;
    use std::collections::HashMap;

    fn enumerated_interval_masses(
        d: &RealizableDistribution,
        m: usize,
        n: usize,
    ) -> HashMap<(usize, usize), f64> {
        let class = ConceptClass::thresholds(n);
        let mut masses: HashMap<(usize, usize), f64> = HashMap::new();
        for (s, w) in enumerate_samples(d, m, 1 << 24).unwrap() {
            let (lo, hi) = class.consistent_interval(&s).unwrap();
            assert!(lo < hi, "targets label their own samples");
            *masses.entry((lo, hi)).or_default() += w;
        }
        masses
    }

    #[test]
    fn threshold_signature_masses_match_enumeration() {
        for (n, k, m) in [(6usize, 3usize, 2usize), (6, 3, 3), (8, 5, 2), (8, 1, 3)] {
            let d = RealizableDistribution::uniform(n, Hypothesis::Threshold(k));
            let sigs = threshold_signatures(&d, m, n).unwrap();
            let total: f64 = sigs.entries.iter().map(|s| s.mass).sum();
            assert!((total - 1.0).abs() < 1e-12, "masses sum to {total}");

            let oracle = enumerated_interval_masses(&d, m, n);
            assert_eq!(sigs.entries.len(), oracle.len());
            for sig in &sigs.entries {
                let expected = oracle
                    .get(&(sig.lo, sig.hi))
                    .unwrap_or_else(|| panic!("missing interval ({}, {})", sig.lo, sig.hi));
                assert!(
                    (sig.mass - expected).abs() < 1e-12,
                    "interval ({}, {}): {} vs {}",
                    sig.lo,
                    sig.hi,
                    sig.mass,
                    expected
                );
            }
        }
    }

    #[test]
    fn threshold_signatures_respect_nonuniform_marginals() {
        let marginal = Dist::new(vec![0.5, 0.0, 0.2, 0.0, 0.3, 0.0]).unwrap();
        let d = RealizableDistribution::new(marginal, Hypothesis::Threshold(4)).unwrap();
        let sigs = threshold_signatures(&d, 3, 6).unwrap();
        let total: f64 = sigs.entries.iter().map(|s| s.mass).sum();
        assert!((total - 1.0).abs() < 1e-12);

        let oracle = enumerated_interval_masses(&d, 3, 6);
        assert_eq!(sigs.entries.len(), oracle.len());
        for sig in &sigs.entries {
            let expected = oracle[&(sig.lo, sig.hi)];
            assert!((sig.mass - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_visitor_covers_the_mass_table() {
        let d = RealizableDistribution::uniform(8, Hypothesis::Threshold(4));
        for m in [1usize, 2, 4] {
            let sigs = threshold_signatures(&d, m, 8).unwrap();
            let mut visited = Vec::new();
            visit_threshold_intervals(&d, m, 8, |lo, hi| visited.push((lo, hi))).unwrap();
            for sig in &sigs.entries {
                assert!(
                    visited.contains(&(sig.lo, sig.hi)),
                    "visitor missed ({}, {}) at m = {m}",
                    sig.lo,
                    sig.hi
                );
            }
        }
    }

    #[test]
    fn far_optimal_table_matches_enumeration() {
        let n = 6;
        let m = 3;
        // the far-from-optimal setting: heavy mass at 1, the rest uniform
        let mut w = vec![1.0 / (m as f64 * (n - 1) as f64); n];
        w[0] = 1.0 - 1.0 / m as f64;
        let d = RealizableDistribution::new(Dist::new(w).unwrap(), Hypothesis::Threshold(2))
            .unwrap();
        let class = ConceptClass::far_optimal(n);
        let learner = GenericLearner::new(class.clone());

        let table = far_optimal_generic_table(&d, m, class.size());
        assert!((table.total_mass() - 1.0).abs() < 1e-12);

        // enumeration oracle: group samples by kernel
        let mut oracle: HashMap<Vec<u32>, (f64, KernelDist)> = HashMap::new();
        for (s, w) in enumerate_samples(&d, m, 1 << 24).unwrap() {
            let key = learner.signature_key(&s).unwrap().unwrap();
            let kernel = learner.kernel(&s).unwrap();
            let slot = oracle.entry(key).or_insert((0.0, kernel));
            slot.0 += w;
        }
        assert_eq!(table.entries.len(), oracle.len());
        for (mass, kernel) in &table.entries {
            let matched = oracle
                .values()
                .find(|(_, k)| k == kernel)
                .unwrap_or_else(|| panic!("kernel {kernel:?} missing from oracle"));
            assert!((mass - matched.0).abs() < 1e-12);
        }
    }
}
