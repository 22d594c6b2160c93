use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("linear system is underdetermined (rank {rank} < {unknowns} unknowns)")]
    Underdetermined { rank: usize, unknowns: usize },

    #[error("cannot parse diagram `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("diagram is not of finite type: {0}")]
    NotFiniteType(String),

    #[error("{0} has no exact rational realization")]
    NotExact(String),

    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),

    #[error("Molien series does not match any degree multiset: {0}")]
    MolienMismatch(String),

    #[error("restriction of the quadratic form to an intersection space of dimension {dim} is degenerate")]
    DegenerateRestriction { dim: usize },

    #[error("arrangement is empty")]
    EmptyArrangement,

    #[error("zero linear form in arrangement")]
    ZeroForm,

    #[error("chamber counts disagree: deletion-restriction {deletion_restriction}, Zaslavsky {zaslavsky}")]
    ChamberMismatch { deletion_restriction: u64, zaslavsky: u64 },

    #[error("class is not Galois-stable at denominator {0}")]
    NotGaloisStable(u64),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial is not in the subalgebra generated by the basic invariants")]
    NotInSubalgebra,

    #[error("no basic invariant of degree {0} found among candidate monomials")]
    InvariantSearchExhausted(u32),

    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },

    #[error("Gamma function pole at s = {0}")]
    GammaPole(f64),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}
