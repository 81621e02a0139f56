use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate value {0}")]
    DuplicateValue(i64),

    #[error("value {value} is outside 1..={max}")]
    ValueOutOfRange { value: i64, max: usize },

    #[error("non-positive value {0}")]
    NonPositive(i64),

    #[error("invalid pattern: {0}")]
    InvalidSpec(String),

    #[error("expected length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("arithmetic overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("{what} = {value} is outside the supported range ({limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: String,
    },

    #[error("missing required value {0}")]
    MissingValue(u64),

    #[error("unknown witness id `{0}`")]
    UnknownWitness(String),

    #[error("bound undefined: {0}")]
    Domain(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("witness `{id}` fails its claim: {detail}")]
    ClaimFailed { id: String, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
