use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcfError {
    #[error("gamma function has a pole at {0}")]
    GammaPole(Complex64),

    #[error("Laplace ray at angle {theta} does not decay for y = {y}")]
    NonconvergentRay { theta: f64, y: Complex64 },

    #[error("branch point in direction {branch} lies on the ray at angle {theta}")]
    SingularRay { theta: f64, branch: f64 },

    #[error("endpoint exponent {0} requires a finite part (Re <= 0)")]
    DivergentEndpoint(Complex64),

    #[error("finite part has a pole at exponent {0}")]
    FinitePartPole(Complex64),

    #[error("Taylor remainder bound {bound:e} exceeds tolerance {tol:e}")]
    SeriesTruncation { bound: f64, tol: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} after {levels} levels")]
    QuadratureNotConverged { estimate: f64, levels: u32 },

    #[error("argument outside the valid domain: {0}")]
    Domain(String),

    #[error("finite-difference stencil leaves the evaluable region")]
    StencilOutOfDomain,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, PcfError>;
