use crate::concepts::{ClassKind, RealizableDistribution};
use crate::learners::{visit_threshold_intervals, LearnerKernel, SigKey};
use crate::{Bits, Dist, Error, Result};

/// The prior upper-bound method: `I(S; A(S)) <= max_S KL(P_{h|S} || Q)` for
/// any fixed distribution `Q` over the class, the max ranging over the
/// realizable signatures of `supp(D^m)`. May be `+inf` when `Q` misses part
/// of a kernel's support.
///
/// Threshold learners with interval kernels take an O(1)-per-signature sweep
/// (prefix sums of `log2 Q`); everything else walks the signature table.
pub fn prior_bound(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    q: &Dist,
    budget: u64,
) -> Result<Bits> {
    if q.len() != l.class().size() {
        return Err(Error::AtomMismatch {
            left: q.len(),
            right: l.class().size(),
        });
    }
    let prefix = log2_prefix(q.probs());
    let n = l.class().domain_size();

    let interval_capable =
        l.class().kind() == ClassKind::Thresholds && l.interval_kernel(0, n).is_some();
    if interval_capable {
        let mut max_kl = 0.0_f64;
        visit_threshold_intervals(d, m, n, |lo, hi| {
            let kernel = l.interval_kernel(lo, hi).expect("interval-capable learner");
            let kl = kernel.kl_to_dense(q.probs(), prefix.as_deref());
            if kl > max_kl {
                max_kl = kl;
            }
        })?;
        return Ok(Bits::new(max_kl));
    }

    let mut max_kl = 0.0_f64;
    match l.signature_table(d, m)? {
        Some(table) => {
            for (_, kernel) in &table.entries {
                max_kl = max_kl.max(kernel.kl_to_dense(q.probs(), prefix.as_deref()));
            }
        }
        None => {
            use std::collections::HashSet;
            let mut seen: HashSet<SigKey> = HashSet::new();
            for (s, _) in crate::concepts::enumerate_samples(d, m, budget)? {
                let key = l.signature_key(&s)?.ok_or_else(|| Error::NoSignature {
                    learner: l.name().to_string(),
                })?;
                if seen.insert(key) {
                    let kl = l.kernel(&s)?.kl_to_dense(q.probs(), prefix.as_deref());
                    max_kl = max_kl.max(kl);
                }
            }
        }
    }
    Ok(Bits::new(max_kl))
}

fn log2_prefix(q: &[f64]) -> Option<Vec<f64>> {
    if q.iter().any(|&p| p <= 0.0) {
        return None;
    }
    let mut prefix = Vec::with_capacity(q.len() + 1);
    prefix.push(0.0);
    for &p in q {
        prefix.push(prefix.last().unwrap() + p.log2());
    }
    Some(prefix)
}

/// The threshold prior centered at the target `f_k`:
/// `Q(t) proportional to 1 / (1 + |k - t|)`. The normalizing constant
/// `c = log2(N) / sum` is at least 1/2 (asserted; an integral comparison
/// bounds the sum by `2 log2 N`).
pub fn threshold_prior(n: usize, k: usize) -> Dist {
    assert!(n >= 2 && (1..=n).contains(&k), "need 1 <= k <= n, n >= 2");
    let weights: Vec<f64> = (1..=n)
        .map(|t| 1.0 / (1.0 + (k as f64 - t as f64).abs()))
        .collect();
    let sum: f64 = weights.iter().sum();
    let c = (n as f64).log2() / sum;
    assert!(
        c >= 0.5,
        "normalizing constant {c} fell below 1/2 at n = {n}, k = {k}"
    );
    Dist::new_unchecked(weights.into_iter().map(|w| w / sum).collect())
}

/// The point-function prior: 1/2 on the target point, the rest uniform.
/// `target` is the domain point (1-based).
pub fn point_prior(n: usize, target: usize) -> Dist {
    assert!(n >= 2 && (1..=n).contains(&target));
    let mut probs = vec![1.0 / (2.0 * (n as f64 - 1.0)); n];
    probs[target - 1] = 0.5;
    Dist::new_unchecked(probs)
}
