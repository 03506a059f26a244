use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The requested step exceeds the explicit stability limit.
    #[error("step {dt:e} exceeds the stability limit {limit:e}")]
    Cfl { dt: f64, limit: f64 },

    /// Integration stopped early; `tau_reached` is the time of the last completed step.
    #[error("step budget of {max_steps} exhausted at tau = {tau_reached} (partial result discarded)")]
    MaxSteps { max_steps: u64, tau_reached: f64 },

    #[error("error mask selects no nodes")]
    EmptyMask,

    #[error("power-law fit: {0}")]
    Fit(String),

    /// The residual stencil leaves the smooth part of the solution.
    #[error("stencil not admissible: {0}")]
    Stencil(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
