//! The lower-bound machinery for consistent proper threshold learners: the
//! decision matrix over fixed-format samples, constructive rich-row
//! extraction by recursive block decomposition, adversarial distribution
//! synthesis, and a numeric certificate `I(S; A(S)) >= Pr[E] * (conditional
//! information term)`.
//!
//! Everything here works in 1-based value space: matrix coordinates are
//! domain points of `[2^n]`, entry distributions range over threshold
//! values `t` (hypothesis index `t - 1`).

use serde::Serialize;

use crate::analysis::{resolve_mi, MiMethod};
use crate::concepts::{ClassKind, Hypothesis, RealizableDistribution, Sample};
use crate::learners::{KernelDist, LearnerKernel};
use crate::{Dist, Error, Result};

/// The table of a learner's output distributions on the samples
/// `((1,0), ..., (1,0), (i,0), (j,1))`. Entries are computed on demand from
/// the kernel; construction verifies the consistency/properness support
/// property for every off-diagonal entry.
pub struct DecisionMatrix<'a> {
    learner: &'a dyn LearnerKernel,
    n_bits: usize,
    n: usize,
    m: usize,
}

pub fn build_matrix<'a>(
    learner: &'a dyn LearnerKernel,
    n_bits: usize,
    m: usize,
) -> Result<DecisionMatrix<'a>> {
    let n = 1usize << n_bits;
    if learner.class().kind() != ClassKind::Thresholds || learner.class().domain_size() != n {
        return Err(Error::Invalid(format!(
            "decision matrix needs a thresholds class on [2^{n_bits}]; learner class is {}",
            learner.class().name()
        )));
    }
    if m < 3 {
        return Err(Error::Invalid(format!(
            "the fixed sample format needs m >= 3, got {m}"
        )));
    }
    let mx = DecisionMatrix {
        learner,
        n_bits,
        n,
        m,
    };
    mx.verify_support()?;
    Ok(mx)
}

impl<'a> DecisionMatrix<'a> {
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn learner(&self) -> &'a dyn LearnerKernel {
        self.learner
    }

    /// Entry `(i, j)` as a distribution over threshold values. Off the
    /// diagonal this is the kernel on the fixed-format sample; the diagonal
    /// is the degenerate distribution at `i` by convention.
    pub fn entry(&self, i: usize, j: usize) -> Result<KernelDist> {
        if i == j {
            return Ok(KernelDist::Point(i));
        }
        let kernel = self.learner.kernel(&self.sample_for(i.min(j), i.max(j)))?;
        Ok(kernel.shifted(1))
    }

    fn sample_for(&self, i: usize, j: usize) -> Sample {
        let mut pairs = vec![(1, false); self.m - 2];
        pairs.push((i, false));
        pairs.push((j, true));
        Sample::from_pairs(&pairs).expect("nonempty by construction")
    }

    /// Every off-diagonal entry must be supported inside `(i, j]` — forced
    /// by consistency and properness; a violation is a hard error naming
    /// the witness.
    fn verify_support(&self) -> Result<()> {
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                let entry = self.entry(i, j)?;
                if (entry.mass_in(i + 1, j + 1) - 1.0).abs() > 1e-12 {
                    return Err(Error::SupportViolation { i, j });
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Row,
    Column,
}

/// A rich row (or column): `t >= n/2` positions on one side of the diagonal
/// whose entry distributions put mass at least 1/2 on pairwise-disjoint
/// value intervals.
#[derive(Clone, Debug, Serialize)]
pub struct RichStructure {
    pub n_bits: usize,
    pub n: usize,
    pub orientation: Orientation,
    /// The shared row (or column) index `r`.
    pub r: usize,
    /// Column indices `> r` (row case) or row indices `< r` (column case).
    pub positions: Vec<usize>,
    /// Inclusive value intervals, aligned with `positions`.
    pub sets: Vec<(usize, usize)>,
}

impl RichStructure {
    pub fn t(&self) -> usize {
        self.positions.len()
    }
}

/// Candidate built by the induction: orientation-free thanks to the
/// symmetric completion (a rich column of `Q` is a rich row of `Q^t = Q`).
struct Candidate {
    index: usize,
    entries: Vec<(usize, (usize, usize))>,
}

/// Constructive form of the block-decomposition induction: recurse on the
/// low and high diagonal blocks, then merge through the pivot entry with
/// the half-mass test (ties go to the column branch).
pub fn find_rich_row(mx: &DecisionMatrix) -> Result<RichStructure> {
    let cand = recurse(mx, 1, mx.n() + 1)?;
    debug_assert_eq!(cand.entries.len(), mx.n_bits() + 1);

    // re-verify the half-mass property and disjointness
    let mut intervals: Vec<(usize, usize)> = Vec::new();
    for &(pos, (set_lo, set_hi)) in &cand.entries {
        let entry = mx.entry(cand.index.min(pos), cand.index.max(pos))?;
        let mass = entry.mass_in(set_lo, set_hi + 1);
        if mass < 0.5 {
            return Err(Error::ChannelPrecondition {
                index: pos,
                mass,
            });
        }
        intervals.push((set_lo, set_hi));
    }
    intervals.sort_unstable();
    for w in intervals.windows(2) {
        if w[1].0 <= w[0].1 {
            return Err(Error::OverlappingSets { first: w[0].0, second: w[1].0 });
        }
    }

    // split into the above- and below-diagonal sides; keep the larger
    let mut above: Vec<(usize, (usize, usize))> = Vec::new();
    let mut below: Vec<(usize, (usize, usize))> = Vec::new();
    for &(pos, set) in &cand.entries {
        if pos > cand.index {
            above.push((pos, set));
        } else if pos < cand.index {
            below.push((pos, set));
        }
    }
    let (orientation, mut side) = if above.len() >= below.len() {
        (Orientation::Row, above)
    } else {
        (Orientation::Column, below)
    };
    side.sort_unstable_by_key(|&(pos, _)| pos);
    let structure = RichStructure {
        n_bits: mx.n_bits(),
        n: mx.n(),
        orientation,
        r: cand.index,
        positions: side.iter().map(|&(pos, _)| pos).collect(),
        sets: side.iter().map(|&(_, set)| set).collect(),
    };
    debug_assert!(
        2 * structure.t() >= mx.n_bits(),
        "pigeonhole guarantees t >= n/2"
    );
    Ok(structure)
}

fn recurse(mx: &DecisionMatrix, lo: usize, hi: usize) -> Result<Candidate> {
    if hi - lo == 1 {
        return Ok(Candidate {
            index: lo,
            entries: vec![(lo, (lo, lo))],
        });
    }
    let mid = lo + (hi - lo) / 2;
    let low = recurse(mx, lo, mid)?;
    let high = recurse(mx, mid, hi)?;
    let pivot = mx.entry(low.index, high.index)?;
    if pivot.mass_in(lo, mid) >= 0.5 {
        let mut entries = high.entries;
        entries.push((low.index, (lo, mid - 1)));
        Ok(Candidate {
            index: high.index,
            entries,
        })
    } else {
        let mut entries = low.entries;
        entries.push((high.index, (mid, hi - 1)));
        Ok(Candidate {
            index: low.index,
            entries,
        })
    }
}

/// The event `E` driving the certificate: samples that are, as a multiset,
/// `m - 2` copies of the anchor, one fixed point labeled 0 (absent when the
/// rich index coincides with the anchor), and one varying point labeled 1
/// in the row case (0 in the column case).
#[derive(Clone, Debug, Serialize)]
pub struct EventSpec {
    pub anchor: usize,
    pub fixed: Option<usize>,
    pub varying: Vec<usize>,
    pub sets: Vec<(usize, usize)>,
    pub merged_anchor: bool,
    pub orientation: Orientation,
    pub target_value: usize,
}

/// Synthesizes the adversarial distribution for a rich structure: mass
/// `1 - 1/(m-2)` at the anchor 1, `1/(2(m-2))` at the rich index, the rest
/// spread evenly over the positions. The target is `f_{r+1}` in the row
/// case and `f_k` in the column case.
///
/// Collisions with the anchor are repaired rather than assumed away: a row
/// index `r = 1` merges into the anchor atom (the event samples coincide as
/// multisets, so the conditional kernels are untouched); a column-case
/// position equal to 1 is dropped from the structure.
pub fn adversarial_distribution(
    rs: &RichStructure,
    m: usize,
) -> Result<(RealizableDistribution, EventSpec)> {
    if m < 4 {
        return Err(Error::Invalid(format!(
            "adversarial distribution needs m >= 4, got {m}"
        )));
    }
    let n = rs.n;
    let spread = 1.0 / (2.0 * (m as f64 - 2.0));

    let (varying, sets): (Vec<usize>, Vec<(usize, usize)>) = match rs.orientation {
        Orientation::Row => (rs.positions.clone(), rs.sets.clone()),
        Orientation::Column => {
            let kept: Vec<(usize, (usize, usize))> = rs
                .positions
                .iter()
                .copied()
                .zip(rs.sets.iter().copied())
                .filter(|&(pos, _)| pos != 1)
                .collect();
            (
                kept.iter().map(|&(p, _)| p).collect(),
                kept.iter().map(|&(_, s)| s).collect(),
            )
        }
    };
    if varying.is_empty() {
        return Err(Error::Invalid(
            "rich structure left no usable positions".to_string(),
        ));
    }

    let merged_anchor = rs.orientation == Orientation::Row && rs.r == 1;
    let fixed = if merged_anchor { None } else { Some(rs.r) };
    let target_value = match rs.orientation {
        Orientation::Row => rs.r + 1,
        Orientation::Column => rs.r,
    };

    let mut probs = vec![0.0; n];
    let anchor_mass = if merged_anchor {
        1.0 - spread
    } else {
        1.0 - 1.0 / (m as f64 - 2.0)
    };
    probs[0] = anchor_mass;
    if let Some(fixed_point) = fixed {
        probs[fixed_point - 1] += spread;
    }
    for &x in &varying {
        probs[x - 1] += spread / varying.len() as f64;
    }

    let d = RealizableDistribution::new(Dist::new(probs)?, Hypothesis::Threshold(target_value))?;
    // the target must label the whole support correctly
    debug_assert!(!d.label(1));
    debug_assert!(fixed
        .is_none_or(|f| d.label(f) == (rs.orientation == Orientation::Column)));
    debug_assert!(varying
        .iter()
        .all(|&x| d.label(x) == (rs.orientation == Orientation::Row)));

    Ok((
        d,
        EventSpec {
            anchor: 1,
            fixed,
            varying,
            sets,
            merged_anchor,
            orientation: rs.orientation,
            target_value,
        },
    ))
}

/// The numeric lower-bound certificate for one learner at one `(n, m)`.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub n_bits: usize,
    pub n: usize,
    pub m: usize,
    pub orientation: Orientation,
    pub r: usize,
    pub positions: Vec<usize>,
    pub t: usize,
    pub pr_event: f64,
    /// The per-arrangement floor `(1-1/(m-2))^{m-2} (1/(2(m-2)))^2`.
    pub pr_event_floor: f64,
    pub deterministic: bool,
    /// `log2 t` (deterministic case) or `(1/2) log2(t/2) - 1` (channel
    /// bound), before clamping at zero.
    pub conditional_bits: f64,
    pub floor_bits: f64,
    pub exact_mi_bits: f64,
    pub mi_method: MiMethod,
    pub vacuous: bool,
    pub holds: bool,
}

pub fn certify_lower_bound(
    mx: &DecisionMatrix,
    rs: &RichStructure,
    budget: u64,
) -> Result<Certificate> {
    let m = mx.m();
    let (d, event) = adversarial_distribution(rs, m)?;

    let p1 = d.point_prob(event.anchor);
    let varying_mass: f64 = event.varying.iter().map(|&x| d.point_prob(x)).sum();
    let pr_event = match event.fixed {
        Some(f) => {
            (m * (m - 1)) as f64 * p1.powi(m as i32 - 2) * d.point_prob(f) * varying_mass
        }
        None => m as f64 * p1.powi(m as i32 - 1) * varying_mass,
    };
    let mf = m as f64;
    let pr_event_floor = (1.0 - 1.0 / (mf - 2.0)).powi(m as i32 - 2) * (0.5 / (mf - 2.0)).powi(2);

    // conditional kernels under the event are exactly the matrix entries
    let mut deterministic = true;
    for (&pos, &(set_lo, set_hi)) in event.varying.iter().zip(&event.sets) {
        let entry = mx.entry(rs.r.min(pos), rs.r.max(pos))?;
        deterministic &= entry.is_deterministic();
        let mass = entry.mass_in(set_lo, set_hi + 1);
        if mass < 0.5 {
            return Err(Error::ChannelPrecondition { index: pos, mass });
        }
    }

    let t = event.varying.len();
    let conditional_bits = if deterministic {
        (t as f64).log2()
    } else {
        0.5 * (t as f64 / 2.0).log2() - 1.0
    };
    let floor_bits = pr_event * conditional_bits.max(0.0);
    let vacuous = conditional_bits <= 0.0;

    let info = resolve_mi(mx.learner(), &d, m, budget)?;
    let holds = info.mi_bits + 1e-9 >= floor_bits;

    Ok(Certificate {
        n_bits: rs.n_bits,
        n: rs.n,
        m,
        orientation: event.orientation,
        r: rs.r,
        positions: event.varying.clone(),
        t,
        pr_event,
        pr_event_floor,
        deterministic,
        conditional_bits,
        floor_bits,
        exact_mi_bits: info.mi_bits,
        mi_method: info.method,
        vacuous,
        holds,
    })
}
