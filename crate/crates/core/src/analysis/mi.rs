use std::collections::HashMap;

use crate::concepts::{enumerate_samples, RealizableDistribution, Sample};
use crate::info_core::mutual_information;
use crate::learners::{LearnerKernel, SigKey, SigTable};
use crate::rng::rng_for;
use crate::{Error, Joint, Result};

use super::{InfoReport, MiMethod};

const BOOTSTRAP_RESAMPLES: usize = 200;

/// Exact mutual information from the dense joint over (sample, hypothesis).
///
/// The enumeration budget applies both to `|supp|^m` and to the number of
/// joint cells; past it, the signature or Monte Carlo path is the move.
pub fn exact_mi(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    budget: u64,
) -> Result<InfoReport> {
    let enumerator = enumerate_samples(d, m, budget)?;
    let rows = enumerator.total_count() as usize;
    let cols = l.class().size();
    let cells = rows as u128 * cols as u128;
    if cells > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: cells,
            budget,
        });
    }
    let mut mass = Vec::with_capacity(rows * cols);
    for (s, w) in enumerator {
        let kernel = l.kernel(&s)?;
        let mut row = vec![0.0; cols];
        for (h, p) in kernel.iter() {
            row[h] = w * p;
        }
        mass.extend(row);
    }
    let joint = Joint::new_unchecked(rows, cols, mass);
    Ok(InfoReport {
        learner: l.name().to_string(),
        n: d.n(),
        m,
        mi_bits: mutual_information(&joint).value(),
        stderr: None,
        method: MiMethod::Exact,
        trials: None,
        seed: None,
    })
}

/// The signature reduction: table, output marginal, and the mutual
/// information `sum_sig w(sig) KL(P_{h|sig} || P_h)`.
pub struct SignatureAnalysis {
    pub table: SigTable,
    pub marginal: Vec<f64>,
    pub mi_bits: f64,
}

/// Groups samples by learner signature (closed form when the learner has
/// one, otherwise enumeration) and computes the mutual information on the
/// reduced joint. Exact wherever it runs.
pub fn signature_analysis(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    budget: u64,
) -> Result<SignatureAnalysis> {
    let table = match l.signature_table(d, m)? {
        Some(table) => table,
        None => {
            let mut index: HashMap<SigKey, usize> = HashMap::new();
            let mut entries: Vec<(f64, crate::learners::KernelDist)> = Vec::new();
            for (s, w) in enumerate_samples(d, m, budget)? {
                let key = l.signature_key(&s)?.ok_or_else(|| Error::NoSignature {
                    learner: l.name().to_string(),
                })?;
                match index.get(&key) {
                    Some(&slot) => entries[slot].0 += w,
                    None => {
                        index.insert(key, entries.len());
                        entries.push((w, l.kernel(&s)?));
                    }
                }
            }
            SigTable { entries }
        }
    };
    debug_assert!(
        (table.total_mass() - 1.0).abs() < 1e-9,
        "signature masses sum to {}",
        table.total_mass()
    );

    let cols = l.class().size();
    let mut marginal = vec![0.0; cols];
    for (w, kernel) in &table.entries {
        for (h, p) in kernel.iter() {
            marginal[h] += w * p;
        }
    }
    let mut mi = 0.0;
    for (w, kernel) in &table.entries {
        for (h, p) in kernel.iter() {
            if p > 0.0 {
                mi += w * p * (p / marginal[h]).log2();
            }
        }
    }
    Ok(SignatureAnalysis {
        table,
        marginal,
        mi_bits: mi.max(0.0),
    })
}

pub fn signature_mi(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    budget: u64,
) -> Result<InfoReport> {
    let analysis = signature_analysis(l, d, m, budget)?;
    Ok(InfoReport {
        learner: l.name().to_string(),
        n: d.n(),
        m,
        mi_bits: analysis.mi_bits,
        stderr: None,
        method: MiMethod::Signature,
        trials: None,
        seed: None,
    })
}

/// The exact figure by the cheapest available route: signature aggregation,
/// then dense enumeration, then the uniform-prior upper bound as a last
/// resort (the report's method says which one was used).
pub fn resolve_mi(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    budget: u64,
) -> Result<InfoReport> {
    match signature_mi(l, d, m, budget) {
        Ok(report) => Ok(report),
        Err(Error::NoSignature { .. }) | Err(Error::BudgetExceeded { .. }) => {
            match exact_mi(l, d, m, budget) {
                Ok(report) => Ok(report),
                Err(Error::BudgetExceeded { .. }) => {
                    let uniform = crate::Dist::uniform(l.class().size());
                    let bound = super::prior_bound(l, d, m, &uniform, budget)?;
                    Ok(InfoReport {
                        learner: l.name().to_string(),
                        n: d.n(),
                        m,
                        mi_bits: bound.value(),
                        stderr: None,
                        method: MiMethod::PriorBound,
                        trials: None,
                        seed: None,
                    })
                }
                Err(e) => Err(e),
            }
        }
        Err(e) => Err(e),
    }
}

/// Plug-in Monte Carlo estimate over sampled (signature, hypothesis) pairs,
/// with a bootstrap standard error. Plug-in estimates are biased upward on
/// small counts; this is the fallback when enumeration cannot run.
pub fn mc_mi(
    l: &dyn LearnerKernel,
    d: &RealizableDistribution,
    m: usize,
    trials: u64,
    seed: u64,
) -> Result<InfoReport> {
    let sampler = d.sampler();
    let mut rng = rng_for(seed, 0);
    let mut key_ids: HashMap<SigKey, u32> = HashMap::new();
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let s = d.draw_sample(m, &sampler, &mut rng);
        let key = match l.signature_key(&s)? {
            Some(key) => key,
            None => encode_sample(&s),
        };
        let next = key_ids.len() as u32;
        let kid = *key_ids.entry(key).or_insert(next);
        let h = l.sample_hypothesis(&s, &mut rng)? as u32;
        pairs.push((kid, h));
    }
    let mi = plugin_mi(&pairs);

    let mut boot_rng = rng_for(seed, 1);
    let mut resampled = vec![(0u32, 0u32); pairs.len()];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..BOOTSTRAP_RESAMPLES {
        use rand::Rng;
        for slot in resampled.iter_mut() {
            *slot = pairs[boot_rng.random_range(0..pairs.len())];
        }
        let v = plugin_mi(&resampled);
        sum += v;
        sum_sq += v * v;
    }
    let r = BOOTSTRAP_RESAMPLES as f64;
    let mean = sum / r;
    let stderr = (sum_sq / r - mean * mean).max(0.0).sqrt();

    Ok(InfoReport {
        learner: l.name().to_string(),
        n: d.n(),
        m,
        mi_bits: mi,
        stderr: Some(stderr),
        method: MiMethod::MonteCarlo,
        trials: Some(trials),
        seed: Some(seed),
    })
}

fn encode_sample(s: &Sample) -> SigKey {
    let mut key = Vec::with_capacity(s.len() * 2);
    for ex in s.examples() {
        key.push(ex.x as u32);
        key.push(ex.y as u32);
    }
    key
}

/// Mutual information of the empirical joint of the pair list.
fn plugin_mi(pairs: &[(u32, u32)]) -> f64 {
    let n = pairs.len() as f64;
    let mut joint: HashMap<(u32, u32), u64> = HashMap::new();
    let mut rows: HashMap<u32, u64> = HashMap::new();
    let mut cols: HashMap<u32, u64> = HashMap::new();
    for &(a, b) in pairs {
        *joint.entry((a, b)).or_default() += 1;
        *rows.entry(a).or_default() += 1;
        *cols.entry(b).or_default() += 1;
    }
    let mut mi = 0.0;
    for (&(a, b), &c) in &joint {
        let p = c as f64 / n;
        let pr = rows[&a] as f64 / n;
        let pc = cols[&b] as f64 / n;
        mi += p * (p / (pr * pc)).log2();
    }
    mi.max(0.0)
}
