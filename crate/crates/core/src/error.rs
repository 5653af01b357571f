use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or solver parameter is invalid.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An integrand or weight produced a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("divergent integral: {0}")]
    Divergence(String),

    #[error("unsupported sphere dimension d = {0} (grids exist for d = 2 and d = 3)")]
    UnsupportedDimension(usize),

    /// The truncated harmonic expansion misses too much of the L2 mass.
    #[error("resolution error: Parseval defect {defect:.3e} exceeds {limit:.3e}")]
    Resolution { defect: f64, limit: f64 },

    /// Two algebraically equal routes to the same constant disagree.
    #[error("consistency error in {what}: residual {residual:.3e}")]
    Consistency { what: String, residual: f64 },

    #[error("sharpness violation: ratio {ratio} vs constant {constant} (relative gap {gap:.3e})")]
    Sharpness { ratio: f64, constant: f64, gap: f64 },

    #[error("no convergence after {iterations} iterations (last residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("azimuthal integration failed between zonal nodes {i} and {j}")]
    AzimuthalIntegration { i: usize, j: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
