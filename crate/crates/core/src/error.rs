use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("theoretical rates need an existence regime, got {0}")]
    WrongRegime(&'static str),
    #[error("operation requires sigma1 == sigma2 (got {sigma1} and {sigma2})")]
    SigmaMismatch { sigma1: f64, sigma2: f64 },
    #[error("no finite critical exponent q >= p exists")]
    NoSolution,
    #[error("Gagliardo-Nirenberg exponent {theta} outside [{lower}, 1]")]
    InvalidRange { theta: f64, lower: f64 },
    #[error("quadrature did not converge: estimate {value:e} with error {error:e}")]
    QuadratureFailure { value: f64, error: f64 },
    #[error("need at least {needed} points in the fit window, found {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("non-positive value {value:e} at t = {t}")]
    NonPositiveValue { t: f64, value: f64 },
    #[error("snapshot gap of {gap} exceeds 10% of the window length {window}")]
    InsufficientSnapshots { gap: f64, window: f64 },
}
