use thiserror::Error;

/// Errors raised by ring, group and cohomology constructions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different descriptors")]
    DescriptorMismatch,
    #[error("no embedding of the requested field into the residue field")]
    NoEmbedding,
    #[error("matrix determinant is not a unit")]
    NonUnitDeterminant,
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("extracted set is not closed: {0}")]
    NotClosed(String),
    #[error("subspace is not invariant under the group action")]
    NotInvariant,
    #[error("linear system too large: {0}")]
    SizeExceeded(String),
    #[error("section is invalid: {0}")]
    SectionInvalid(String),
    #[error("map does not commute with the group action")]
    NotEquivariant,
    #[error("kernel is not an abelian p-group")]
    KernelNotAbelianP,
    #[error("input classes differ in the ambient module")]
    ClassesDiffer,
    #[error("2-cocycle law fails: {0}")]
    CocycleInvalid(String),
    #[error("conjugation action mismatch: {0}")]
    ActionMismatch(String),
    #[error("subgroup does not surject onto the base group")]
    NotSurjective,
    #[error("kernel of the subgroup does not match the given submodule")]
    KernelMismatch,
    #[error("instance violates the theorem hypotheses: {0}")]
    HypothesisViolated(String),
    #[error("residual image is smaller than SL_n(k)")]
    ResidualImageTooSmall,
    #[error("unexpected cohomological obstruction on a gated instance")]
    UnexpectedObstruction,
    #[error("non-integral coefficient in the power formula")]
    NonIntegralCoefficient,
    #[error("no homomorphic section found where one was expected")]
    SectionNotFound,
    #[error("classification failed with witness vector {0:?}")]
    ClassificationFailure(Vec<u32>),
    #[error("parse error at position {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
