//! A desk-scale laboratory for learners that use little information.
//!
//! Finite-domain PAC learners are modeled as explicit randomized kernels
//! `sample -> distribution over hypotheses`. On top of those kernels the
//! crate computes the mutual information between input sample and output
//! hypothesis — exactly by enumeration, exactly by signature aggregation, or
//! by a plug-in Monte Carlo estimator — and evaluates the generalization
//! bounds, prior upper-bound method, stability inequalities, and adversarial
//! lower-bound certificates that hang off that quantity.
//!
//! Layout:
//!
//! * [`info_core`] — entropy, KL, mutual information, total variation, and
//!   executable inequality checks (divergence control, fiber control,
//!   channel lower bounds, data processing). Generic over the scalar type.
//! * [`concepts`] — domains, labeled samples, hypothesis classes, realizable
//!   distributions, error functionals.
//! * [`learners`] — the learner kernels: generic consistent learner,
//!   deterministic threshold ERM, the far-from-optimal ERM, the cover-based
//!   sharpness learner, the distribution-dependent net learner, and
//!   confidence boosting.
//! * [`analysis`] — information reports, prior bounds, generalization /
//!   stability / PAC-Bayes experiments.
//! * [`adversary`] — decision matrices, rich-row extraction, adversarial
//!   distribution synthesis, lower-bound certificates.

pub mod adversary;
pub mod analysis;
pub mod concepts;
pub mod info_core;
pub mod learners;
pub mod rng;
pub mod scalar;

mod error;

pub use error::{Error, Result};

/// Probability vector at the default scalar type.
pub type Dist = info_core::FiniteDistribution<f64>;
/// Joint distribution at the default scalar type.
pub type Joint = info_core::JointDistribution<f64>;
/// Information value (base-2 logarithms) at the default scalar type.
pub type Bits = info_core::Bits<f64>;
