use thiserror::Error;

/// Errors raised by the solvers and model constructors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("filling ratio alpha must lie in (0, 1], got {0}")]
    FillingRatio(f64),

    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },

    #[error("taper profile 1 + phi*X + psi*X^2 reaches {min:.6} on [0, 1]; it must stay positive")]
    TaperNotPositive { min: f64 },

    #[error("boundary functionals are linearly dependent (pivot {pivot:.3e})")]
    SingularFunctionals { pivot: f64 },

    #[error("Chebyshev order must be at least 4, got {0}")]
    OrderTooLow(usize),

    #[error("Galerkin index n must be in 5..=20, got {0}")]
    GalerkinSize(usize),

    #[error("finite-difference grid needs at least 201 nodes, got {0}")]
    GridTooCoarse(usize),

    #[error("collocation grid is invalid: {0}")]
    Grid(String),

    #[error("linear system is singular: {0}")]
    Singular(String),

    #[error("network layout is invalid: {0}")]
    Network(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
