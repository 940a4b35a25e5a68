use alloc::string::String;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols} in {op}")]
    DimensionMismatch { op: &'static str, left_rows: usize, left_cols: usize, right_rows: usize, right_cols: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("exact arithmetic cannot represent this value: {0}")]
    ExactUnsupported(&'static str),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("unknown letter `{0}` (not in the alphabet)")]
    UnknownLetter(char),

    #[error("branch enumeration would visit {count} branches (limit {limit})")]
    BranchLimitExceeded { count: u128, limit: u64 },

    #[error("invalid basis sequence: {0}")]
    InvalidBasisSeq(String),

    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,

    #[error("weight {0} is outside [0, 1]")]
    WeightOutOfRange(String),

    #[error("automaton carries no declared cut-point metadata")]
    MissingMeta,

    #[error("cut-point normalization requires a cut-point in (0,1) different from 1/2, got {0}")]
    BadCutpoint(String),

    #[error("exact evaluation of {what} exceeds the exact-mode limit ({limit}); use floating-point evaluation")]
    ExactLimit { what: &'static str, limit: u64 },

    #[error("monoid construction exceeded the element limit ({0})")]
    MonoidLimitExceeded(usize),

    #[error("profile machine exceeded the state limit ({0})")]
    ProfileLimitExceeded(usize),

    #[error("no profile width up to {0} separates the language; increase the bound")]
    ProfileWidthExceeded(usize),

    #[error("the language is not recognizable by a measure-only automaton with isolated cut-point")]
    NotLmoMember,

    #[error("synthesis verification failed: {0}")]
    SynthesisFailed(String),

    #[error("parse error in {what}: {message}")]
    Parse { what: &'static str, message: String },

    #[error("invalid DFA: {0}")]
    InvalidDfa(String),
}

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
