use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("binomial coefficient C({n}, {k}) exceeds the integer capacity")]
    BinomialOverflow { n: usize, k: usize },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: u128,
        expected: String,
    },
    #[error("word length mismatch: expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("position {position} does not fit a word of {len} lines")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("pulse positions must be strictly increasing")]
    UnsortedPositions,
    #[error("rank {rank} out of range for C({n}, {m}) = {limit}")]
    RankOutOfRange {
        rank: u128,
        n: usize,
        m: usize,
        limit: u128,
    },
    #[error("invalid codec spec: {0}")]
    InvalidSpec(String),
    #[error("invalid linear code: {0}")]
    InvalidCode(String),
    #[error("corrupted bus word: {0}")]
    CorruptedWord(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

impl Error {
    pub(crate) fn out_of_range(
        name: &'static str,
        value: impl Into<u128>,
        expected: impl Into<String>,
    ) -> Self {
        Error::OutOfRange {
            name,
            value: value.into(),
            expected: expected.into(),
        }
    }
}
