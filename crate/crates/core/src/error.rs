use thiserror::Error;

use crate::axioms::AxiomReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator `{generator}` is undefined at t = {t} (domain is t > 0)")]
    Domain { generator: String, t: f64 },

    #[error("generator `{generator}` produced a non-finite value at t = {t}")]
    NonFinite { generator: String, t: f64 },

    #[error("unknown generator `{0}` (expected one of: log, neg_inverse, log_plus_linear)")]
    UnknownGenerator(String),

    #[error("alpha must be a finite nonnegative real, got {0}")]
    InvalidAlpha(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no delta found: f({smallest_t:e}) = {value} is still >= {target} at the underflow floor")]
    NoDelta { target: f64, smallest_t: f64, value: f64 },

    #[error("invalid space: {0}")]
    InvalidSpace(#[from] SpaceError),

    #[error("chain enumeration exceeded the budget of {cap} chains")]
    ChainBudget { cap: u64 },

    #[error("space is not an F-metric under the given witness")]
    NotFMetric(Box<AxiomReport>),

    #[error("induced distance violates the metric axioms: {0}")]
    InducedNotMetric(String),

    #[error("dimension mismatch: expected {expected} points, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("certificate witness ({cert}) differs from verification witness ({given})")]
    WitnessMismatch { cert: String, given: String },

    #[error("invalid ball selector `{0}` (expected \"D\" or \"d\")")]
    InvalidSelector(String),

    #[error("invalid ball center {center} for a space of {n} points")]
    InvalidCenter { center: usize, n: usize },

    #[error("search result hit at trial {trial} does not re-validate: {reason}")]
    InvalidHit { trial: u64, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reasons a distance table is rejected at load time.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("space has no points")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("{labels} labels for a {n}x{n} matrix")]
    LabelCount { labels: usize, n: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("negative entry {value} at ({i}, {j})")]
    Negative { i: usize, j: usize, value: f64 },
    #[error("nonzero diagonal {value} at ({i}, {i})")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("asymmetric: dist[{i}][{j}] = {a} but dist[{j}][{i}] = {b}")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("unparseable entry `{text}` at row {row}")]
    Parse { row: usize, text: String },
}
