//! Physics-informed network baseline.
//!
//! A small tanh network approximates the displacement directly. Its fourth
//! input derivative is needed by the beam operator, so the forward pass
//! propagates [`InputJet`]s and the reverse pass differentiates through the
//! jet arithmetic to get exact parameter gradients.

mod jet;
mod mlp;

pub use jet::{InputJet, TanhJet};
pub use mlp::{layers_with_depth, mlp_forward_jet, parameter_count, MlpParams, Tape, DEFAULT_LAYERS, DEFAULT_SEED};

use std::time::Instant;

use crate::beam::{BeamConfig, BoundaryKind, OperatorCoefficients};
use crate::dfl_tfc::CollocationGrid;
use crate::error::Result;
use crate::lbfgs::{lbfgs_minimize, LbfgsSettings};
use crate::solution::{Deflection, Method, SolveResult};

/// Boundary terms entering the penalty: `(X, derivative order)`.
fn boundary_terms(bc: BoundaryKind) -> [(f64, usize); 4] {
    match bc {
        BoundaryKind::SS => [(0.0, 0), (1.0, 0), (0.0, 2), (1.0, 2)],
        BoundaryKind::CS => [(0.0, 0), (1.0, 0), (0.0, 1), (1.0, 2)],
    }
}

/// Precomputed operator coefficients on a grid, reusable across loss
/// evaluations.
pub struct PinnProblem {
    net: MlpParams,
    bc: BoundaryKind,
    points: Vec<(f64, OperatorCoefficients)>,
}

impl PinnProblem {
    pub fn new(net: &MlpParams, cfg: &BeamConfig, grid: &CollocationGrid) -> Self {
        Self {
            net: net.clone(),
            bc: cfg.bc,
            points: grid
                .points()
                .iter()
                .map(|&x| (x, OperatorCoefficients::at(x, cfg)))
                .collect(),
        }
    }

    /// Mean squared residual plus a quarter of the squared boundary terms,
    /// and its gradient with respect to `params`.
    pub fn loss_and_grad(&self, params: &[f64]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; params.len()];
        let n = self.points.len() as f64;
        let mut loss = 0.0;
        for (x, op) in &self.points {
            let tape = self.net.forward_tape(params, *x);
            let u = tape.output().0;
            let r = op.residual(u[2], u[3], u[4]);
            loss += r * r / n;
            let s = 2.0 * r / n;
            let adjoint = [0.0, 0.0, s * op.c2, s * op.c3, s * op.c4];
            self.net.backward(params, &tape, &adjoint, &mut grad);
        }
        for (x, order) in boundary_terms(self.bc) {
            let tape = self.net.forward_tape(params, x);
            let v = tape.output().0[order];
            loss += 0.25 * v * v;
            let mut adjoint = [0.0; 5];
            adjoint[order] = 0.5 * v;
            self.net.backward(params, &tape, &adjoint, &mut grad);
        }
        (loss, grad)
    }
}

pub fn pinn_loss_and_grad(params: &MlpParams, cfg: &BeamConfig, grid: &CollocationGrid) -> (f64, Vec<f64>) {
    PinnProblem::new(params, cfg, grid).loss_and_grad(&params.params)
}

/// Training options besides the optimizer schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct PinnOptions {
    pub layer_sizes: Vec<usize>,
    pub seed: u64,
    pub grid: CollocationGrid,
    pub settings: LbfgsSettings,
}

impl Default for PinnOptions {
    fn default() -> Self {
        Self {
            layer_sizes: DEFAULT_LAYERS.to_vec(),
            seed: DEFAULT_SEED,
            grid: CollocationGrid::default(),
            settings: LbfgsSettings::pinn(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PinnSolution {
    pub result: SolveResult,
    pub network: MlpParams,
    pub iterations: usize,
}

impl PinnSolution {
    pub fn jet(&self, x: f64) -> [f64; 5] {
        self.network.forward_jet(x)
    }
}

impl Deflection for PinnSolution {
    fn displacement(&self, x: f64) -> f64 {
        self.network.forward_jet(x)[0]
    }
}

pub fn train_pinn(cfg: &BeamConfig, settings: &LbfgsSettings, seed: u64) -> Result<PinnSolution> {
    train_pinn_with(
        cfg,
        &PinnOptions {
            seed,
            settings: *settings,
            ..PinnOptions::default()
        },
    )
}

pub fn train_pinn_with(cfg: &BeamConfig, options: &PinnOptions) -> Result<PinnSolution> {
    cfg.validate()?;
    options.settings.validate().map_err(crate::error::Error::Network)?;
    let start = Instant::now();
    let init = MlpParams::init(&options.layer_sizes, options.seed)?;
    let problem = PinnProblem::new(&init, cfg, &options.grid);
    let out = lbfgs_minimize(|p: &[f64]| problem.loss_and_grad(p), &init.params, &options.settings);
    let network = MlpParams {
        params: out.x.clone(),
        ..init
    };
    let result = SolveResult {
        method: Method::Pinn,
        weights: out.x,
        final_loss: out.loss,
        wall_time: start.elapsed().as_secs_f64(),
        loss_trace: out.trace,
        line_search_failed: out.line_search_failed,
        rank: None,
    };
    Ok(PinnSolution {
        result,
        network,
        iterations: out.iterations,
    })
}
