use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: no data rows")]
    NoDataRows { path: PathBuf },

    #[error("{path}: row {row}, column {column}: cannot parse {value:?} as a number")]
    BadCell {
        path: PathBuf,
        row: usize,
        column: String,
        value: String,
    },

    #[error("label column {0:?} not found")]
    LabelColumn(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("class {class} has only {count} instance(s); stratified split needs at least 2")]
    ClassTooSmall { class: usize, count: usize },

    #[error("empty subset")]
    EmptySubset,

    #[error("subset length {got} does not match feature count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("k = {k} exceeds the number of reference rows ({rows})")]
    KTooLarge { k: usize, rows: usize },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty front")]
    EmptyFront,

    #[error("point ({error_pct}, {n_selected}) lies outside the reference box [0,100]x[0,{n_features}]")]
    OutsideReferenceBox {
        error_pct: f64,
        n_selected: usize,
        n_features: usize,
    },

    #[error("no nonzero differences")]
    NoNonzeroDifferences,

    #[error("{0} nonzero differences exceed the exact enumeration limit of 20")]
    TooManyDifferences(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
