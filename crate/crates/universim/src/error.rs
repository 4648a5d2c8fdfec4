use thiserror::Error;

/// Crate-wide error type. Every failure carries enough payload to act on:
/// mismatched objects are named, violating pairs are spelled out, and
/// search-space refusals include the size estimate that tripped the guard.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("domain mismatch in {op}: {detail}")]
    DomainMismatch { op: &'static str, detail: String },

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("invalid finite set: {0}")]
    InvalidSet(String),

    #[error("invalid pair in relation: {0}")]
    InvalidPair(String),

    #[error("unknown program {0:?}")]
    UnknownProgram(String),

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("duplicate name {0:?}")]
    DuplicateName(String),

    #[error("simulator is not universal: {0}")]
    NotUniversal(String),

    #[error("search space too large: estimated {estimate} candidates exceeds limit {limit}")]
    SearchSpaceTooLarge { estimate: u128, limit: u128 },

    #[error("witness {witness:?} is not monotone: valuation({above:?}) = {above_value} < {below_value} = valuation({below:?}) although {above:?} reduces to {below:?}")]
    WitnessNotMonotone {
        witness: String,
        above: String,
        below: String,
        above_value: u64,
        below_value: u64,
    },

    #[error("no-go criterion needs a functional compiler; compiler relates a program to {0} targets")]
    RelationalCompiler(usize),

    #[error("endomorphism has a fixed point at {0:?}")]
    FixedPointPresent(String),

    #[error("found a realizer {target:?} for the diagonal; a precondition must have been violated")]
    RealizerFound { target: String },

    #[error("configuration does not match system: {0}")]
    ConfigMismatch(String),

    #[error("energy not representable at quantization {quantization}: {energy}")]
    QuantizationOverflow { quantization: i64, energy: String },

    #[error("input of length {len} exceeds budget maxInputLength {max}")]
    InputTooLong { len: usize, max: usize },

    #[error("machine exceeds encoding bounds: {0}")]
    BoundsExceeded(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
