//! Uniform front over every solver: run one method on one configuration and
//! sample its deflection.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use taperbeam::dfl_tfc::{self, SolveMode};
use taperbeam::galerkin::galerkin_solve;
use taperbeam::oracles::{fd_solve, AnalyticCase};
use taperbeam::pinn::{layers_with_depth, train_pinn_with, PinnOptions};
use taperbeam::{BeamConfig, Deflection, LbfgsSettings, Method};

use crate::config::SolverOptions;
use crate::error::{CliError, CliResult};

pub const HIDDEN_WIDTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    /// Constrained Chebyshev expansion, exact least squares
    DflTfc,
    /// Constrained Chebyshev expansion trained with L-BFGS
    DflTfcLbfgs,
    Galerkin,
    /// Physics-informed network baseline
    Pinn,
    /// Finite differences with Richardson extrapolation
    Fd,
    /// Closed form (solid untapered uniformly loaded S-S beams only)
    Analytic,
}

impl MethodArg {
    pub const ALL: [MethodArg; 6] = [
        MethodArg::DflTfc,
        MethodArg::DflTfcLbfgs,
        MethodArg::Galerkin,
        MethodArg::Pinn,
        MethodArg::Fd,
        MethodArg::Analytic,
    ];

    pub fn method(self) -> Method {
        match self {
            MethodArg::DflTfc => Method::DflTfcLeastSquares,
            MethodArg::DflTfcLbfgs => Method::DflTfcLbfgs,
            MethodArg::Galerkin => Method::Galerkin,
            MethodArg::Pinn => Method::Pinn,
            MethodArg::Fd => Method::FiniteDifference,
            MethodArg::Analytic => Method::Analytic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MethodArg::DflTfc => "dfl-tfc",
            MethodArg::DflTfcLbfgs => "dfl-tfc-lbfgs",
            MethodArg::Galerkin => "galerkin",
            MethodArg::Pinn => "pinn",
            MethodArg::Fd => "fd",
            MethodArg::Analytic => "analytic",
        }
    }

    pub fn parse(s: &str) -> CliResult<Self> {
        <Self as ValueEnum>::from_str(s, true).map_err(|_| {
            let names: Vec<_> = Self::ALL.iter().map(|m| m.name()).collect();
            CliError::flag("method", format!("expected one of {}, got {s:?}", names.join(", ")))
        })
    }
}

/// One solver run, sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub method: Method,
    /// `(X, 100 W(X))`
    pub samples: Vec<(f64, f64)>,
    /// Final training or collocation loss; absent for the references.
    pub loss: Option<f64>,
    pub wall_time: f64,
    pub loss_trace: Vec<f64>,
    pub line_search_failed: bool,
}

fn sample(model: &impl Deflection, xs: &[f64]) -> Vec<(f64, f64)> {
    xs.iter().map(|&x| (x, model.deflection(x))).collect()
}

fn finite(loss: f64) -> Option<f64> {
    loss.is_finite().then_some(loss)
}

pub fn run(method: MethodArg, cfg: &BeamConfig, opts: &SolverOptions, xs: &[f64]) -> CliResult<Outcome> {
    let grid = opts.collocation()?;
    let start = std::time::Instant::now();
    let (samples, result) = match method {
        MethodArg::DflTfc | MethodArg::DflTfcLbfgs => {
            let mode = if method == MethodArg::DflTfc {
                SolveMode::LeastSquares
            } else {
                SolveMode::Lbfgs(LbfgsSettings::dfl_tfc())
            };
            let sol = dfl_tfc::solve(cfg, opts.order, &grid, mode)?;
            (sample(&sol, xs), Some(sol.result))
        }
        MethodArg::Galerkin => {
            let sol = galerkin_solve(cfg, opts.galerkin_n)?;
            (sample(&sol, xs), Some(sol.result))
        }
        MethodArg::Pinn => {
            let options = PinnOptions {
                layer_sizes: layers_with_depth(opts.hidden_layers, HIDDEN_WIDTH),
                seed: opts.seed,
                grid,
                settings: LbfgsSettings::pinn(),
            };
            let sol = train_pinn_with(cfg, &options)?;
            (sample(&sol, xs), Some(sol.result))
        }
        MethodArg::Fd => (sample(&fd_solve(cfg, opts.fd_grid)?, xs), None),
        MethodArg::Analytic => {
            let case = AnalyticCase::for_config(cfg).ok_or_else(|| {
                CliError::flag(
                    "method",
                    "the closed form needs alpha = 1 (or N = 0), phi = psi = gamma = 0 and bc = ss",
                )
            })?;
            (sample(&case, xs), None)
        }
    };
    let wall_time = start.elapsed().as_secs_f64();
    Ok(match result {
        Some(r) => Outcome {
            method: method.method(),
            samples,
            loss: finite(r.final_loss),
            wall_time: r.wall_time,
            loss_trace: r.loss_trace,
            line_search_failed: r.line_search_failed,
        },
        None => Outcome {
            method: method.method(),
            samples,
            loss: None,
            wall_time,
            loss_trace: Vec::new(),
            line_search_failed: false,
        },
    })
}
