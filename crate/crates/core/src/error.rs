use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probability vector sums to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("negative probability {value} at atom {index}")]
    NegativeProb { index: usize, value: f64 },

    #[error("distribution must have at least one atom")]
    EmptyDistribution,

    #[error("atom count mismatch: {left} vs {right}")]
    AtomMismatch { left: usize, right: usize },

    #[error("event has nu-mass {mass}; divergence-control bound is undefined")]
    DegenerateEvent { mass: f64 },

    #[error("alpha must lie in (0, 1), got {alpha}")]
    InvalidAlpha { alpha: f64 },

    #[error("fiber over column {col} has mass {mass} >= alpha = {alpha}")]
    FiberTooHeavy { col: usize, mass: f64, alpha: f64 },

    #[error("kernel {index} puts mass {mass} < 1/2 on its target set")]
    ChannelPrecondition { index: usize, mass: f64 },

    #[error("target sets {first} and {second} are not disjoint")]
    OverlappingSets { first: usize, second: usize },

    #[error("sample must contain at least one example")]
    EmptySample,

    #[error("sample is not realizable by the class")]
    NonRealizable,

    #[error("cover learner requires all labels to be 1")]
    NotAllOnes,

    #[error(
        "enumeration needs {required} samples, budget is {budget} \
         (use the signature or monte-carlo path instead)"
    )]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("learner `{learner}` declares no signature")]
    NoSignature { learner: String },

    #[error("sample has {got} examples, learner needs {expected}")]
    SampleLength { expected: usize, got: usize },

    #[error("cover redraw limit reached; union-measure estimates were {estimates:?}")]
    CoverRetries { estimates: Vec<f64> },

    #[error(
        "decision-matrix entry ({i}, {j}) has support outside ({i}, {j}]: \
         learner is not consistent and proper for thresholds"
    )]
    SupportViolation { i: usize, j: usize },

    #[error("invalid configuration: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
