//! Information-theoretic primitives and executable inequality lemmas.
//!
//! Atoms are dense integer indices `0..n`; anything with structure
//! (hypotheses, samples, signatures) is interned to indices before any
//! information computation happens here. All logarithms are base 2.

mod dist;
mod lemmas;
mod measures;

pub use dist::{Bits, FiniteDistribution, JointDistribution};
pub use lemmas::{
    channel_mi_lower_check, data_processing_check, div_control_check, fiber_control_check,
    negative_part_check, InequalityCheck,
};
pub use measures::{conditional_entropy, entropy, kl, mutual_information, tv_distance};
