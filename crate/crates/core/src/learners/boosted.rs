//! Confidence amplification: run the base learner on `k = ceil(log2(2/delta))`
//! disjoint subsamples, validate the candidates on a held-out segment, output
//! the candidate with minimal validation error (lowest subsample index on
//! ties). The statement and the proof of the amplification theorem disagree
//! on the validation size by a factor of 4; the larger (proof) size is used
//! and both are reported.

use std::collections::BTreeMap;

use crate::concepts::{disagreement_count, ConceptClass, RealizableDistribution, Sample};
use crate::learners::{KernelDist, LearnerKernel, SigKey, SigTable};
use crate::{Error, Result};

const PRODUCT_GUARD: usize = 1 << 22;
const SEGMENT_BUDGET: u64 = 10_000_000;

pub struct Boosted<B: LearnerKernel> {
    base: B,
    m0: usize,
    k: usize,
    validation_len: usize,
    validation_len_statement: usize,
    delta: f64,
    eps: f64,
    name: String,
}

impl<B: LearnerKernel> Boosted<B> {
    pub fn new(base: B, m0: usize, delta: f64, eps: f64) -> Result<Self> {
        if !(0.0 < delta && delta <= 1.0) || !(0.0 < eps && eps <= 1.0) || m0 == 0 {
            return Err(Error::Invalid(format!(
                "boosting needs m0 >= 1, delta in (0,1], eps in (0,1]; got {m0}, {delta}, {eps}"
            )));
        }
        let k = (2.0 / delta).log2().ceil() as usize;
        let ln_term = (4.0 * (2.0 / delta).log2() / delta).ln();
        let validation_len = (2.0 * ln_term / (eps * eps)).ceil() as usize;
        let validation_len_statement = (2.0 * ln_term / (4.0 * eps * eps)).ceil() as usize;
        let name = format!("boosted({}, k={k})", base.name());
        Ok(Boosted {
            base,
            m0,
            k,
            validation_len,
            validation_len_statement,
            delta,
            eps,
            name,
        })
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn validation_len(&self) -> usize {
        self.validation_len
    }

    pub fn validation_len_statement(&self) -> usize {
        self.validation_len_statement
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Required input sample length `k * m0 + validation`.
    pub fn expected_len(&self) -> usize {
        self.k * self.m0 + self.validation_len
    }

    fn partition<'a>(&self, s: &'a Sample) -> Result<(Vec<Sample>, Sample)> {
        let expected = self.expected_len();
        if s.len() != expected {
            return Err(Error::SampleLength {
                expected,
                got: s.len(),
            });
        }
        let subsamples = (0..self.k)
            .map(|i| s.segment(i * self.m0, self.m0))
            .collect::<Result<Vec<_>>>()?;
        let validation = s.segment(self.k * self.m0, self.validation_len)?;
        Ok((subsamples, validation))
    }
}

/// Mixes the product of independent candidate kernels through the
/// deterministic validation argmin.
fn winner_distribution(
    candidates: &[KernelDist],
    err_count: impl Fn(usize) -> usize,
) -> Result<KernelDist> {
    let supports: Vec<Vec<(usize, f64)>> = candidates.iter().map(|k| k.iter().collect()).collect();
    let product: usize = supports.iter().map(|s| s.len()).product();
    if product > PRODUCT_GUARD {
        return Err(Error::BudgetExceeded {
            required: product as u128,
            budget: PRODUCT_GUARD as u64,
        });
    }
    let mut accum: BTreeMap<usize, f64> = BTreeMap::new();
    let mut odometer = vec![0usize; supports.len()];
    loop {
        let mut weight = 1.0;
        let mut winner = usize::MAX;
        let mut winner_err = usize::MAX;
        for (i, &slot) in odometer.iter().enumerate() {
            let (h, p) = supports[i][slot];
            weight *= p;
            let err = err_count(h);
            if err < winner_err {
                winner_err = err;
                winner = h;
            }
        }
        *accum.entry(winner).or_default() += weight;

        let mut pos = supports.len();
        let mut rolled_over = true;
        while pos > 0 {
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < supports[pos].len() {
                rolled_over = false;
                break;
            }
            odometer[pos] = 0;
        }
        if rolled_over {
            break;
        }
    }
    let (support, probs): (Vec<usize>, Vec<f64>) = accum.into_iter().unzip();
    if support.len() == 1 {
        return Ok(KernelDist::Point(support[0]));
    }
    Ok(KernelDist::sparse(support, probs))
}

impl<B: LearnerKernel> LearnerKernel for Boosted<B> {
    fn name(&self) -> &str {
        &self.name
    }

    fn class(&self) -> &ConceptClass {
        self.base.class()
    }

    fn kernel(&self, s: &Sample) -> Result<KernelDist> {
        let (subsamples, validation) = self.partition(s)?;
        let candidates = subsamples
            .iter()
            .map(|sub| self.base.kernel(sub))
            .collect::<Result<Vec<_>>>()?;
        let class = self.base.class();
        winner_distribution(&candidates, |h| {
            disagreement_count(class.hypothesis(h), &validation)
        })
    }

    fn signature_key(&self, s: &Sample) -> Result<Option<SigKey>> {
        let (subsamples, validation) = self.partition(s)?;
        let mut key: SigKey = Vec::new();
        for sub in &subsamples {
            match self.base.signature_key(sub)? {
                Some(sub_key) => {
                    key.push(sub_key.len() as u32);
                    key.extend(sub_key);
                }
                None => return Ok(None),
            }
        }
        // validation enters only through its type (counts per domain point)
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for ex in validation.examples() {
            *counts.entry(ex.x).or_default() += 1;
        }
        key.push(u32::MAX);
        for (x, c) in counts {
            key.push(x as u32);
            key.push(c);
        }
        Ok(Some(key))
    }

    /// Exact signature table built from the product structure of the input:
    /// the `k` subsamples and the validation segment are independent, so the
    /// signature distribution is the product of per-segment tables.
    fn signature_table(&self, d: &RealizableDistribution, m: usize) -> Result<Option<SigTable>> {
        if m != self.expected_len() {
            return Err(Error::SampleLength {
                expected: self.expected_len(),
                got: m,
            });
        }
        // group subsample space by the base learner's signature
        let mut groups: Vec<(f64, KernelDist)> = Vec::new();
        {
            let mut index: BTreeMap<SigKey, usize> = BTreeMap::new();
            for (sub, w) in crate::concepts::enumerate_samples(d, self.m0, SEGMENT_BUDGET)? {
                let key = match self.base.signature_key(&sub)? {
                    Some(key) => key,
                    None => return Ok(None),
                };
                match index.get(&key) {
                    Some(&slot) => groups[slot].0 += w,
                    None => {
                        index.insert(key, groups.len());
                        groups.push((w, self.base.kernel(&sub)?));
                    }
                }
            }
        }

        let support = d.support();
        let class = self.base.class();
        let compositions = enumerate_compositions(self.validation_len, support.len());
        let mut entries = Vec::new();
        let mut group_odometer = vec![0usize; self.k];
        loop {
            let segment_mass: f64 = group_odometer.iter().map(|&g| groups[g].0).product();
            let candidates: Vec<KernelDist> = group_odometer
                .iter()
                .map(|&g| groups[g].1.clone())
                .collect();
            for comp in &compositions {
                let mass = segment_mass * composition_mass(d, &support, comp);
                if mass <= 0.0 {
                    continue;
                }
                let kernel = winner_distribution(&candidates, |h| {
                    let hyp = class.hypothesis(h);
                    support
                        .iter()
                        .zip(comp)
                        .filter(|&(&x, _)| hyp.eval(x) != d.label(x))
                        .map(|(_, &c)| c as usize)
                        .sum()
                })?;
                entries.push((mass, kernel));
            }

            let mut pos = self.k;
            let mut rolled_over = true;
            while pos > 0 {
                pos -= 1;
                group_odometer[pos] += 1;
                if group_odometer[pos] < groups.len() {
                    rolled_over = false;
                    break;
                }
                group_odometer[pos] = 0;
            }
            if rolled_over {
                break;
            }
        }
        Ok(Some(SigTable { entries }))
    }
}

/// All count vectors of `total` draws over `parts` bins.
fn enumerate_compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=total {
            prefix.push(c as u32);
            rec(total - c, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Probability that the validation segment has exactly these per-point
/// counts: multinomial coefficient times the product of point masses.
fn composition_mass(d: &RealizableDistribution, support: &[usize], comp: &[u32]) -> f64 {
    let mut mass = 1.0;
    let mut remaining: u64 = comp.iter().map(|&c| c as u64).sum();
    for (&x, &c) in support.iter().zip(comp) {
        mass *= binomial(remaining, c as u64) * d.point_prob(x).powi(c as i32);
        remaining -= c as u64;
    }
    mass
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k.min(n));
    let mut value = 1.0;
    for i in 0..k {
        value = value * (n - i) as f64 / (i + 1) as f64;
    }
    value
}
