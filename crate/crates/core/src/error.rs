//! Error types for the crate, one enum per subsystem.

use thiserror::Error;

/// Errors raised while loading or validating datasets.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing required column {0:?}")]
    MissingColumn(String),
    #[error("row {row}: expected {expected} fields, found {found}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}: non-positive time {value}")]
    NonPositiveTime { row: usize, value: f64 },
    #[error("row {row}: status {value:?} outside {{0,1}}")]
    InvalidStatus { row: usize, value: String },
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a number")]
    BadNumericCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: missing value in required column {column:?}")]
    MissingOutcome { row: usize, column: String },
    #[error("duplicate feature name {0:?}")]
    DuplicateFeature(String),
    #[error("dataset is empty")]
    Empty,
    #[error("record {index} has {found} covariates, expected {expected}")]
    CovariateLength {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("record {index}: categorical level index {level} out of range for feature {feature:?}")]
    LevelOutOfRange {
        index: usize,
        feature: String,
        level: usize,
    },
    #[error("fold count {k} out of range (need 2 <= k <= {n})")]
    FoldCountOutOfRange { k: usize, n: usize },
    #[error("unknown config key {0:?}")]
    UnknownConfigKey(String),
    #[error("config value for {key:?}: {message}")]
    BadConfigValue { key: String, message: String },
}

/// Errors raised by minority-class synthesis.
#[derive(Debug, Error)]
pub enum BalanceError {
    #[error("record {0} is not in the minority class")]
    NotMinority(usize),
    #[error("minority class has {size} records, need more than {needed}")]
    MinorityTooSmall { size: usize, needed: usize },
    #[error("record {record} has a missing value for feature {feature}; impute before balancing")]
    MissingValue { record: usize, feature: usize },
    #[error("covariate vectors have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("one of the classes is empty (censored {censored}, events {events})")]
    EmptyClass { censored: usize, events: usize },
    #[error("invalid SMOTE config: {0}")]
    BadConfig(String),
}

/// Errors raised while growing or applying forests.
#[derive(Debug, Error)]
pub enum ForestError {
    #[error("invalid forest parameters: {0}")]
    BadParams(String),
    #[error("split evaluation needs non-empty groups on both sides")]
    EmptySide,
    #[error("split evaluation needs at least one death among members")]
    NoDeaths,
    #[error("feature {0:?} has no observed values; cannot impute")]
    FeatureAllMissing(String),
    #[error("covariate vector has {found} entries, model expects {expected}")]
    CovariateLength { found: usize, expected: usize },
    #[error("model io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model serialization error: {0}")]
    Serde(#[from] serde_json::Error),
    #[error("unsupported model format version {found} (supported: {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },
}

/// Errors raised by evaluation metrics.
#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("no permissible pairs for the concordance index")]
    NoPermissiblePairs,
    #[error("empty test set")]
    EmptyTestSet,
    #[error("empty evaluation grid")]
    EmptyGrid,
    #[error("tau {tau} exceeds last grid time {last}")]
    TauBeyondGrid { tau: f64, last: f64 },
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
}

/// Errors raised by the idealized-split formulas.
#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("need m2 >= 2*d0 (got m2={m2}, d0={d0})")]
    MortalityTooSmall { m2: u32, d0: u32 },
    #[error("need m2_prime >= m2 (got m2_prime={m2_prime}, m2={m2})")]
    ShrinkingMinority { m2_prime: u32, m2: u32 },
    #[error("invalid parameter: {0}")]
    BadParam(String),
}

/// Errors raised by the experiment harness.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Balance(#[from] BalanceError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("could not draw valid folds after {attempts} attempts: {reason}")]
    FoldDrawFailed { attempts: u32, reason: String },
    #[error("invalid experiment config: {0}")]
    BadConfig(String),
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("report io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
