use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain where a model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dataset is empty")]
    EmptyDataset,

    /// The regression design cannot identify the requested parameters.
    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    /// A multi-frequency model was asked to fit single-frequency data.
    #[error("{model} needs at least two distinct frequencies (found {found}); use {fallback} instead")]
    SingleFrequency {
        model: &'static str,
        fallback: &'static str,
        found: usize,
    },

    #[error("singular normal equations: {0}")]
    Singular(String),

    /// A fitted quantity is mathematically undefined for this data.
    #[error("undefined parameter: {0}")]
    Undefined(String),

    #[error("invalid settings: {0}")]
    InvalidSettings(String),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("missing required column `{0}`")]
    MissingColumn(&'static str),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Every point of a sensitivity sweep was skipped.
    #[error("every sweep point was skipped; first cause: {0}")]
    EmptySweep(String),
}
