//! Result types shared by every solver.

use serde::{Deserialize, Serialize};

/// Which solver produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Constrained expression with Chebyshev free function, exact least squares.
    #[serde(rename = "dfl-tfc-ls")]
    DflTfcLeastSquares,
    /// Same model trained iteratively with L-BFGS.
    #[serde(rename = "dfl-tfc-lbfgs")]
    DflTfcLbfgs,
    #[serde(rename = "galerkin")]
    Galerkin,
    #[serde(rename = "pinn")]
    Pinn,
    #[serde(rename = "fd")]
    FiniteDifference,
    #[serde(rename = "analytic")]
    Analytic,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::DflTfcLeastSquares => "dfl-tfc-ls",
            Method::DflTfcLbfgs => "dfl-tfc-lbfgs",
            Method::Galerkin => "galerkin",
            Method::Pinn => "pinn",
            Method::FiniteDifference => "fd",
            Method::Analytic => "analytic",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub method: Method,
    /// Trained weights or expansion coefficients.
    pub weights: Vec<f64>,
    /// Mean squared strong-form residual over the collocation grid (plus the
    /// boundary penalty for the network baseline). `NaN` when the method
    /// does not minimize a collocation loss.
    pub final_loss: f64,
    pub wall_time: f64,
    /// Loss after each optimizer round; empty for direct solves.
    pub loss_trace: Vec<f64>,
    pub line_search_failed: bool,
    /// Numerical rank of the least-squares system, when one was solved.
    pub rank: Option<usize>,
}

impl SolveResult {
    pub fn direct(method: Method, weights: Vec<f64>, final_loss: f64, wall_time: f64) -> Self {
        Self {
            method,
            weights,
            final_loss,
            wall_time,
            loss_trace: Vec::new(),
            line_search_failed: false,
            rank: None,
        }
    }
}

/// Anything that can report the transverse displacement along the beam.
pub trait Deflection {
    /// Non-dimensional displacement `W(X)`.
    fn displacement(&self, x: f64) -> f64;

    /// Reported deflection `100 * W(X)`.
    fn deflection(&self, x: f64) -> f64 {
        100.0 * self.displacement(x)
    }
}

impl<T: Deflection + ?Sized> Deflection for Box<T> {
    fn displacement(&self, x: f64) -> f64 {
        (**self).displacement(x)
    }
}
