use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("index out of bounds: {what} {index} >= {len}")]
    Index {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("target lost for {cycles} consecutive cycles (starting at cycle {first_cycle})")]
    Gap { cycles: usize, first_cycle: usize },

    #[error("no target detected")]
    NoTarget,

    #[error("degenerate distance span: {span:.3} m < {required:.3} m")]
    DegenerateSpan { span: f64, required: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("height axes differ between spectra")]
    AxisMismatch,

    #[error("range error: {0}")]
    Range(String),

    #[error("threshold mismatch: {0} m vs {1} m")]
    ThresholdMismatch(f64, f64),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
