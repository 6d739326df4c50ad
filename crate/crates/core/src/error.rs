use thiserror::Error;

/// Errors raised by the word, exponent, construction and dynamics APIs.
///
/// Every variant names the precondition that was violated so the CLI can
/// surface it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be between 2 and 36, got {0}")]
    InvalidBase(u32),

    #[error("digit {digit} at position {position} is not below base {base}")]
    DigitOutOfRange { position: usize, digit: u32, base: u8 },

    #[error("invalid digit character {0:?}")]
    InvalidDigitChar(char),

    #[error("operation requires a binary word, got base {0}")]
    NotBinary(u8),

    #[error("malformed rational {0:?} (expected p/q with q >= 1)")]
    MalformedRational(String),

    #[error("value {value} outside the required range {range}")]
    OutOfRange { value: String, range: String },

    #[error("length mismatch: p = {p} but the word has length {len}")]
    LengthMismatch { p: usize, len: usize },

    #[error("period must be at least 1")]
    ZeroPeriod,

    #[error("word of length {len} exceeds the oracle bound {bound}")]
    OracleBound { len: usize, bound: usize },

    #[error("target exponent {alpha} violates precondition: {requirement}")]
    TargetOutOfContract { alpha: String, requirement: String },

    #[error("word {0} is not a subword of the Thue-Morse sequence")]
    NotThueMorseSubword(String),

    #[error("word must be nonempty")]
    EmptyWord,

    #[error("comparison with a real target undecided after {0} digits")]
    Undecided(usize),

    #[error("targets must be sorted ascending")]
    UnsortedTargets,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
