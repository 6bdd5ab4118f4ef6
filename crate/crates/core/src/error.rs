use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A candle file row could not be read. `row` counts data rows from 1.
    #[error("{message} at row {row}")]
    Parse { row: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input")]
    EmptyInput,

    #[error("insufficient data: need {required}, have {available}")]
    InsufficientData { required: usize, available: usize },

    #[error("series and indicator lengths differ ({series} vs {indicator})")]
    Misaligned { series: usize, indicator: usize },

    #[error("extrema do not alternate at point {0}")]
    NotAlternating(usize),

    #[error("non-positive sample {value} at index {index}")]
    NonPositiveSample { index: usize, value: f64 },

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    /// Survival probability of a truncation point fell below the underflow floor.
    #[error("tail too deep: survival probability {0:e} below 1e-300")]
    TailTooDeep(f64),

    #[error("only {accepted} draws satisfied the entry condition (need 100)")]
    TooFewAccepted { accepted: usize },
}
