use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// All arithmetic here is exact; errors only arise from malformed inputs
/// (shape mismatches, singular lattices, out-of-range parameters) or from
/// text parsing, never from rounding.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: relation matrix has {cols} columns but ambient rank is {ambient}")]
    DimensionMismatch { cols: usize, ambient: usize },

    #[error("rank mismatch: left operand has rank {left}, right operand has rank {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },

    #[error("exponent arithmetic overflowed a signed 64-bit integer")]
    ExponentOverflow,

    #[error("variable index {axis} out of range for rank {rank}")]
    AxisOutOfRange { axis: usize, rank: usize },

    #[error("count must be at least 1")]
    ZeroCount,

    #[error("lattice basis must be square, got {rows}x{cols}")]
    NonSquareBasis { rows: usize, cols: usize },

    #[error("lattice basis is singular")]
    SingularLattice,

    #[error("lattice index {index} is too large to enumerate cosets")]
    LatticeIndexTooLarge { index: String },

    #[error("lattice coordinates exceed the supported 64-bit exponent range")]
    LatticeCoordinateOverflow,

    #[error("relation {index} has {got} components, expected {expected}")]
    RelationShape {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),

    #[error("multiplier must be at least 2, got {0}")]
    MultiplierTooSmall(u64),

    #[error("top rank must be at least 1")]
    ZeroRank,

    #[error("operation requires a lamplighter family with prime modulus, got {0}")]
    CompositeModulus(u64),

    #[error("operation is only defined for {expected}, got {got}")]
    UnsupportedFamily { expected: String, got: String },

    #[error("ideal polynomial is degenerate: {0}")]
    DegenerateIdeal(String),

    #[error("subgroup does not contain the derived subgroup")]
    MissingDerived,

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
