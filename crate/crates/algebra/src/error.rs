use thiserror::Error;

/// Failures of the symbolic layer. Every variant names the offending input;
/// callers (CLI validation in particular) surface these verbatim.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("polynomial uses {poly_vars} variables but the partition assigns {assigned}")]
    PartitionSizeMismatch { poly_vars: usize, assigned: usize },

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("cluster indices must cover 0..{expected} without gaps; found index {found}")]
    NonContiguousClusters { expected: usize, found: usize },

    #[error("variance for {0} is negative")]
    NegativeVariance(String),

    #[error("timescale factor is negative")]
    NegativeTimescale,

    #[error("mass of coordinate `{0}` must be positive")]
    NonPositiveMass(String),

    #[error("coordinate names must be unique and nonempty")]
    BadCoordinates,

    #[error("term polynomial uses variables outside the spec coordinates: `{0}`")]
    ForeignVariable(String),

    #[error("decoherence generator `{0}` is constant; constant generators act as zero and must be pruned")]
    ConstantGenerator(String),

    #[error("decoherence strength for generator `{0}` is negative")]
    NegativeStrength(String),

    #[error("pair coupling ({0}, {1}) is a self-coupling or out of range")]
    BadPairCoupling(usize, usize),

    #[error("per-coordinate table has {found} entries for {expected} coordinates")]
    CouplingLengthMismatch { expected: usize, found: usize },

    #[error("potential must be univariate, got {0} variables")]
    NotUnivariate(usize),

    #[error(
        "partition chain inconsistent at level {level}: spec has {coordinates} coordinates, partition assigns {assigned}"
    )]
    InconsistentPartitionChain {
        level: usize,
        coordinates: usize,
        assigned: usize,
    },

    #[error("partition chain exhausted after {0} levels before the signature stabilized")]
    PartitionChainExhausted(usize),

    #[error("signature pattern over {0} variables exceeds the canonicalization limit")]
    PatternTooWide(usize),
}
