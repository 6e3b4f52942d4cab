use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: left has {left} bits, right has {right} bits")]
    LengthMismatch { left: usize, right: usize },

    #[error("range {start}..{end} out of bounds for a string of {len} bits")]
    OutOfRange { start: usize, end: usize, len: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} must be {expected} bits wide, got {actual}")]
    WidthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("nu(0) is undefined")]
    NuOfZero,

    #[error("x̄ undefined: message has {len} bits but the key width is {n}")]
    MessageTooShort { len: usize, n: usize },

    #[error("message exceeds max block count: {blocks} blocks > L = {max}")]
    TooManyBlocks { blocks: usize, max: usize },

    #[error("input too long for a {width}-bit length field ({len} bits)")]
    Overlong { len: usize, width: usize },

    #[error("messages must differ")]
    IdenticalMessages,

    #[error("messages do not collide under the construction")]
    NotACollision,

    #[error("no colliding round found")]
    NoCollidingRound,

    #[error("oracle point {point} was already queried and cannot be programmed")]
    LateProgramming { point: String },

    #[error("embedding infeasible: {0}")]
    EmbedInfeasible(String),

    #[error("domain of {bits} bits is too large to enumerate (max {max})")]
    DomainTooLarge { bits: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown {kind} `{name}`; registered: {known}")]
    UnknownSpec {
        kind: &'static str,
        name: String,
        known: String,
    },
}
