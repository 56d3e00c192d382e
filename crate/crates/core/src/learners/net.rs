//! The distribution-dependent net learner: a hierarchy of epsilon-nets at
//! scales `eps_k = (1/(m+1))^k`, searched coarse-to-fine for the first
//! consistent member. Knowing the marginal is what buys the low information.

use crate::concepts::{
    disagreement_count, vc_dimension, ClassKind, ConceptClass, RealizableDistribution, Sample,
};
use crate::learners::{KernelDist, LearnerKernel, SigKey, SigTable};
use crate::{Dist, Error, Result};

use super::signatures::threshold_signatures;

const MAX_LEVELS: usize = 24;

/// Net levels `N_1, N_2, ...` (hypothesis indices in within-level search
/// order) with their scales. The last level is always the full class, so the
/// search terminates structurally.
pub struct NetHierarchy {
    pub levels: Vec<Vec<usize>>,
    pub eps: Vec<f64>,
}

/// Deterministic, proper, consistent learner for a class of known VC
/// dimension under a known marginal.
pub struct NetLearner {
    class: ConceptClass,
    hierarchy: NetHierarchy,
    vc_dim: usize,
    name: String,
}

impl NetLearner {
    pub fn new(class: ConceptClass, d_x: &Dist, m: usize) -> Result<Self> {
        if d_x.len() != class.domain_size() {
            return Err(Error::AtomMismatch {
                left: d_x.len(),
                right: class.domain_size(),
            });
        }
        if m == 0 {
            return Err(Error::EmptySample);
        }
        let vc_dim = vc_dimension(&class);
        let distances = pairwise_disagreement(&class, d_x);

        let mut levels = Vec::new();
        let mut eps = Vec::new();
        for k in 1..=MAX_LEVELS {
            let eps_k = (1.0 / (m as f64 + 1.0)).powi(k as i32);
            let net = cover_at(&class, &distances, eps_k, vc_dim)?;
            let full = net.len() == class.size();
            levels.push(net);
            eps.push(eps_k);
            if full {
                break;
            }
        }
        // structural termination: the final level is the whole class
        if levels.last().map(|l| l.len()) != Some(class.size()) {
            levels.push((0..class.size()).collect());
            eps.push(0.0);
        }

        let name = format!("net({})", class.name());
        Ok(NetLearner {
            class,
            hierarchy: NetHierarchy { levels, eps },
            vc_dim,
            name,
        })
    }

    pub fn hierarchy(&self) -> &NetHierarchy {
        &self.hierarchy
    }

    pub fn vc_dim(&self) -> usize {
        self.vc_dim
    }

    /// The level `K` (1-based) at which the search stops, plus the output.
    pub fn stop_level(&self, s: &Sample) -> Result<(usize, usize)> {
        if let Some((lo, hi)) = self.class.consistent_interval(s) {
            if lo >= hi {
                return Err(Error::NonRealizable);
            }
            for (level, net) in self.hierarchy.levels.iter().enumerate() {
                if let Some(&h) = net.iter().find(|&&h| h >= lo && h < hi) {
                    return Ok((level + 1, h));
                }
            }
            return Err(Error::NonRealizable);
        }
        for (level, net) in self.hierarchy.levels.iter().enumerate() {
            if let Some(&h) = net
                .iter()
                .find(|&&h| disagreement_count(self.class.hypothesis(h), s) == 0)
            {
                return Ok((level + 1, h));
            }
        }
        Err(Error::NonRealizable)
    }
}

impl LearnerKernel for NetLearner {
    fn name(&self) -> &str {
        &self.name
    }

    fn class(&self) -> &ConceptClass {
        &self.class
    }

    fn kernel(&self, s: &Sample) -> Result<KernelDist> {
        Ok(KernelDist::Point(self.stop_level(s)?.1))
    }

    fn signature_key(&self, s: &Sample) -> Result<Option<SigKey>> {
        Ok(Some(vec![self.stop_level(s)?.1 as u32]))
    }

    fn signature_table(&self, d: &RealizableDistribution, m: usize) -> Result<Option<SigTable>> {
        if self.class.kind() != ClassKind::Thresholds {
            return Ok(None);
        }
        let sigs = threshold_signatures(d, m, self.class.domain_size())?;
        let mut entries = Vec::with_capacity(sigs.entries.len());
        for sig in sigs.entries {
            let kernel = self
                .interval_kernel(sig.lo, sig.hi)
                .ok_or(Error::NonRealizable)?;
            entries.push((sig.mass, kernel));
        }
        Ok(Some(SigTable { entries }))
    }

    fn interval_kernel(&self, lo: usize, hi: usize) -> Option<KernelDist> {
        if lo >= hi {
            return None;
        }
        for net in &self.hierarchy.levels {
            if let Some(&h) = net.iter().find(|&&h| h >= lo && h < hi) {
                return Some(KernelDist::Point(h));
            }
        }
        None
    }
}

fn pairwise_disagreement(class: &ConceptClass, d_x: &Dist) -> Vec<Vec<f64>> {
    let size = class.size();
    let n = class.domain_size();
    let mut dist = vec![vec![0.0; size]; size];
    for a in 0..size {
        for b in a + 1..size {
            let (ha, hb) = (class.hypothesis(a), class.hypothesis(b));
            let d: f64 = (1..=n)
                .filter(|&x| ha.eval(x) != hb.eval(x))
                .map(|x| d_x.prob(x - 1))
                .sum();
            dist[a][b] = d;
            dist[b][a] = d;
        }
    }
    dist
}

/// Greedy cover: repeatedly add the hypothesis covering the most uncovered
/// hypotheses within `eps` disagreement mass (lowest index on ties). The
/// size certificate `|N_k| <= (4e^2 / eps_k)^d` is asserted post hoc; if
/// greedy ever exceeded it, a minimal cover found exhaustively would be used
/// instead (possible for small classes only).
fn cover_at(
    class: &ConceptClass,
    distances: &[Vec<f64>],
    eps: f64,
    vc_dim: usize,
) -> Result<Vec<usize>> {
    let size = class.size();
    let mut uncovered: Vec<bool> = vec![true; size];
    let mut remaining = size;
    let mut net = Vec::new();
    while remaining > 0 {
        let mut best = usize::MAX;
        let mut best_count = 0usize;
        for cand in 0..size {
            let count = (0..size)
                .filter(|&h| uncovered[h] && distances[cand][h] <= eps)
                .count();
            if count > best_count {
                best_count = count;
                best = cand;
            }
        }
        debug_assert!(best != usize::MAX, "every hypothesis covers itself");
        net.push(best);
        for h in 0..size {
            if uncovered[h] && distances[best][h] <= eps {
                uncovered[h] = false;
                remaining -= 1;
            }
        }
    }
    net.sort_unstable();

    let haussler = (4.0 * std::f64::consts::E.powi(2) / eps).powi(vc_dim as i32);
    if (net.len() as f64) > haussler {
        if size <= 16 {
            if let Some(minimal) = exhaustive_minimal_cover(distances, eps) {
                if (minimal.len() as f64) <= haussler {
                    return Ok(minimal);
                }
            }
        }
        return Err(Error::Invalid(format!(
            "cover of size {} exceeds the ({:.1})^{} certificate",
            net.len(),
            4.0 * std::f64::consts::E.powi(2) / eps,
            vc_dim
        )));
    }
    Ok(net)
}

/// Smallest cover by exhaustive search over subsets in size order.
fn exhaustive_minimal_cover(distances: &[Vec<f64>], eps: f64) -> Option<Vec<usize>> {
    let size = distances.len();
    for target in 1..=size {
        let mut subset: Vec<usize> = (0..target).collect();
        loop {
            let covers = (0..size)
                .all(|h| subset.iter().any(|&c| distances[c][h] <= eps));
            if covers {
                return Some(subset);
            }
            let mut i = target;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if subset[i] < size - (target - i) {
                    subset[i] += 1;
                    for j in i + 1..target {
                        subset[j] = subset[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    None
}
