use std::path::PathBuf;

/// Errors raised by every stage of the mining pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("line {line}: {interesting} interesting votes exceed {total} total votes")]
    VoteInversion {
        line: usize,
        interesting: u64,
        total: u64,
    },
    #[error("entity {entity_id}: conflicting display names {first:?} and {second:?}")]
    DuplicateEntityConflict {
        entity_id: String,
        first: String,
        second: String,
    },
    #[error("sentence {sentence_id}: token {token} points at head {head} outside 0..{len}")]
    DanglingHead {
        sentence_id: String,
        token: usize,
        head: i64,
        len: usize,
    },
    #[error("sentence {sentence_id}: no token is attached to ROOT")]
    NoRoot { sentence_id: String },
    #[error("empty input text")]
    EmptyInput,

    #[error("likeness ratio undefined for a trivium with zero votes")]
    ZeroVotes,
    #[error("no trivia left to grade after filtering")]
    EmptyAfterFilter,
    #[error("invalid grading config: {0}")]
    InvalidConfig(String),

    #[error("cannot fit a feature space on an empty training set")]
    EmptyTrainingSet,
    #[error("feature space must be frozen before featurizing")]
    UnfrozenSpace,
    #[error("readability needs at least one word")]
    NoWords,

    #[error("no preference pairs: every group has uniform grades")]
    NoPairs,
    #[error("C must be positive, got {0}")]
    NonPositiveC(f64),
    #[error("model was trained on feature space {model}, vectors use {space}")]
    SpaceMismatch { model: String, space: String },
    #[error("ranked items span several groups ({0} and {1})")]
    MixedGroups(String, String),
    #[error("baseline needs gold labels on every item")]
    MissingLabels,
    #[error("classifier training data holds a single class")]
    SingleClassTraining,

    #[error("recall undefined: zero positives")]
    ZeroPositives,
    #[error("kappa undefined: expected agreement is 1")]
    DegenerateMarginals,
    #[error("paired samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("paired t-test needs at least two pairs, got {0}")]
    TooFewPairs(usize),
    #[error("group {0} has no gold labels")]
    MissingGold(String),

    #[error("{0}")]
    Format(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(line: usize, reason: impl Into<String>) -> Self {
        Error::MalformedRecord {
            line,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
