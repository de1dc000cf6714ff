use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("integration failure at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("degenerate flow map: Jacobian {value:e} at r = {r}")]
    DegenerateFlowMap { r: f64, value: f64 },

    #[error("blow-up detected at tau = {tau}, r = {r}")]
    BlowUp { tau: f64, r: f64 },

    #[error("step rejected: dtau = {dtau:e} exceeds the stability limit {limit:e}")]
    StepRejected { dtau: f64, limit: f64 },

    #[error("a-priori bound violated at tau = {tau}: {}", .bounds.join(", "))]
    AprioriViolated { tau: f64, bounds: Vec<String> },

    #[error("operator order {order} exceeds the supported maximum {max}")]
    OrderTooHigh { order: usize, max: usize },

    #[error("iteration diverged at iterate {iterate}")]
    IterationDiverged { iterate: usize },

    #[error("time window mismatch: {0}")]
    WindowMismatch(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
