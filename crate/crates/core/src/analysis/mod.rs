//! Mutual-information computation (exact, signature-aggregated, Monte
//! Carlo), the prior upper-bound method, and the numerical verification
//! experiments for the generalization, stability, and PAC-Bayes bounds.

mod bounds;
mod experiments;
mod mi;

pub use bounds::{point_prior, prior_bound, threshold_prior};
pub use experiments::{
    far_optimal_comparison, generalization_experiment, net_stopping_experiment, pac_bayes_check,
    sharpness_experiment, stability_profile, FarOptimalReport, GenGapReport, NetReport,
    PacBayesReport, SharpnessReport, StabilityReport,
};
pub use mi::{exact_mi, mc_mi, resolve_mi, signature_analysis, signature_mi, SignatureAnalysis};

use std::fmt;

use serde::Serialize;

/// How a mutual-information figure was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MiMethod {
    /// Dense joint over the enumerated sample space.
    Exact,
    /// Aggregation over kernel signatures; exact wherever it runs.
    Signature,
    /// Plug-in estimate over sampled (signature, hypothesis) pairs.
    MonteCarlo,
    /// Upper bound via `max_S KL(P_{h|S} || Q)`.
    PriorBound,
}

impl fmt::Display for MiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            MiMethod::Exact => "exact",
            MiMethod::Signature => "signature",
            MiMethod::MonteCarlo => "monte-carlo",
            MiMethod::PriorBound => "prior-bound",
        };
        f.write_str(tag)
    }
}

/// One computed mutual-information figure with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct InfoReport {
    pub learner: String,
    pub n: usize,
    pub m: usize,
    pub mi_bits: f64,
    /// Bootstrap standard error; present for estimates only.
    pub stderr: Option<f64>,
    pub method: MiMethod,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}
