use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid coupling function: {0}")]
    InvalidCoupling(String),

    /// The δ′ matching degenerates when the coupling sits at ±1.
    #[error("singular δ′ coupling F = {value} (|F ∓ 1| below 1e-12)")]
    SingularCoupling { value: f64 },

    #[error("invalid boundary parameters: {0}")]
    InvalidParams(String),

    #[error("singular conversion: 2 − α − γ = {0:e}")]
    SingularConversion(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("degenerate matching system at k = {k}")]
    DegenerateSystem { k: f64 },

    #[error("no sign change of the bound-state function on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("non-finite value encountered while evaluating at E = {0}")]
    NonFinite(f64),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("modified norm is not positive ({0:e}); state cannot be normalized")]
    NonNormalizable(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("bad domain: {0}")]
    BadDomain(String),
}
