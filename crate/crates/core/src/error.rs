//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by word parsing and the algebraic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Word syntax error; `pos` is the byte offset into the input text.
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// A generator index exceeded the alphabet size.
    #[error("generator index {id} out of range (alphabet size {alphabet})")]
    GeneratorOutOfRange { id: u32, alphabet: usize },

    /// Operands live over different alphabets.
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    /// Operands disagree in component count.
    #[error("component count mismatch: {left} vs {right}")]
    ComponentMismatch { left: usize, right: usize },

    /// Truncated-series operands disagree in variable count, truncation
    /// degree, or square-free mode.
    #[error("series mode mismatch: {0}")]
    ModeMismatch(String),

    /// A coefficient was requested beyond the truncation degree.
    #[error("multiindex of length {len} exceeds truncation degree {degree}")]
    DegreeExceeded { len: usize, degree: usize },

    /// An argument failed a structural precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A permutation vector is not a bijection of the expected domain.
    #[error("malformed permutation {perm:?}, expected a bijection of {domain}")]
    MalformedPermutation { perm: Vec<u32>, domain: String },

    /// A multiindex that must have pairwise distinct entries repeats one.
    #[error("repeated index in multiindex {0:?}")]
    RepeatedIndex(Vec<u32>),

    /// Indeterminacy computation is missing a lower-order value.
    #[error("missing lower-order invariant for index {index:?} target {target}")]
    MissingLowerOrder { index: Vec<u32>, target: u32 },

    /// An operation requiring a Brunnian input received a non-Brunnian one.
    #[error("input is not Brunnian: deleting strand {witness} leaves a nontrivial link")]
    NotBrunnian { witness: usize },

    /// Lie elements over different generator sets were combined.
    #[error("generator set mismatch: {left} vs {right}")]
    GeneratorSetMismatch { left: usize, right: usize },

    /// A Lie element that must be multilinear is not.
    #[error("element is not multilinear: {0}")]
    NotMultilinear(String),

    /// The peeling procedure failed to trivialize its residual. This
    /// indicates an internal inconsistency and is never expected on
    /// valid inputs.
    #[error("normal form residual nontrivial after final stage (internal inconsistency)")]
    ResidualNontrivial,
}

pub type Result<T> = std::result::Result<T, Error>;
