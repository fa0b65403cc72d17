use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input gain b must be nonzero")]
    ZeroInputGain,

    #[error("dither frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),

    #[error("invalid step size {0}")]
    InvalidStep(f64),

    #[error("invalid time span [{t0}, {tf}]")]
    InvalidSpan { t0: f64, tf: f64 },

    #[error("state is non-finite: y = {y}, k = {k}")]
    NonFiniteState { y: f64, k: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("assumption {id} failed: {detail}")]
    Assumption { id: String, detail: String },

    #[error("Chen-Fliess step T = {step} is not a whole number of dither periods (2π/ω = {period})")]
    NotWholePeriods { step: f64, period: f64 },

    #[error("Chen-Fliess order {0} is not tabulated (0..=3)")]
    UnsupportedOrder(usize),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
