//! Functional-connection spectral solver.
//!
//! The trial deflection is a constrained expression whose free function is a
//! Chebyshev expansion in `2X - 1`. Both the constrained expression and the
//! beam operator are linear in the free function, so the collocation residual
//! is exactly `A w - b` and the mean squared residual is a convex quadratic in
//! the weights. It can be minimized directly or iteratively with L-BFGS.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::beam::{BeamConfig, OperatorCoefficients};
use crate::chebyshev::{eval_basis, free_function, BasisSet};
use crate::error::{Error, Result};
use crate::lbfgs::{lbfgs_minimize, LbfgsSettings};
use crate::linalg::solve_least_squares;
use crate::solution::{Deflection, Method, SolveResult};
use crate::tfc::{ConstrainedExpression, FreeFunctionData};

/// Chebyshev order used unless stated otherwise.
pub const DEFAULT_ORDER: usize = 15;
/// Collocation points used unless stated otherwise.
pub const DEFAULT_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Uniform,
    ChebyshevGaussLobatto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollocationGrid {
    points: Vec<f64>,
    kind: GridKind,
}

impl CollocationGrid {
    /// `n` equally spaced points including both ends.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {n}")));
        }
        let points = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        Ok(Self {
            points,
            kind: GridKind::Uniform,
        })
    }

    /// Chebyshev-Gauss-Lobatto nodes mapped to `[0, 1]`, ascending.
    pub fn chebyshev_lobatto(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {n}")));
        }
        let m = (n - 1) as f64;
        let points = (0..n)
            .map(|i| (1.0 - (std::f64::consts::PI * i as f64 / m).cos()) / 2.0)
            .collect();
        Ok(Self {
            points,
            kind: GridKind::ChebyshevGaussLobatto,
        })
    }

    pub fn new(kind: GridKind, n: usize) -> Result<Self> {
        match kind {
            GridKind::Uniform => Self::uniform(n),
            GridKind::ChebyshevGaussLobatto => Self::chebyshev_lobatto(n),
        }
    }

    /// Arbitrary points; must be strictly increasing inside `[0, 1]`.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Grid("no points".into()));
        }
        if points.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::Grid("points must lie in [0, 1]".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Grid("points must be strictly increasing".into()));
        }
        Ok(Self {
            points,
            kind: GridKind::Uniform,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for CollocationGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_POINTS).expect("default grid is valid")
    }
}

/// How the weights are found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMode {
    LeastSquares,
    Lbfgs(LbfgsSettings),
}

/// Boundary functionals of each basis function `T_k`, shape `(order+1) x 4`.
fn basis_functionals(ce: &ConstrainedExpression, order: usize) -> Vec<[f64; 4]> {
    let left = eval_basis(0.0, order);
    let right = eval_basis(1.0, order);
    left.iter()
        .zip(&right)
        .map(|(l, r)| ce.functional_values(l, r))
        .collect()
}

/// Collocation system with `residual(X_i) = (A w - b)_i`.
pub fn assemble_system(cfg: &BeamConfig, grid: &CollocationGrid, order: usize) -> Result<(DMatrix<f64>, DVector<f64>)> {
    cfg.validate()?;
    let basis = BasisSet::new(order)?;
    let ce = ConstrainedExpression::for_boundary(cfg.bc);
    let functionals = basis_functionals(&ce, order);
    let n = grid.len();
    let mut a = DMatrix::zeros(n, basis.len());
    let mut b = DVector::zeros(n);
    for (i, &x) in grid.points().iter().enumerate() {
        let op = OperatorCoefficients::at(x, cfg);
        let switching = ce.switching_jets(x);
        for (k, (row, c)) in eval_basis(x, order).iter().zip(&functionals).enumerate() {
            let data = FreeFunctionData {
                at_x: *row,
                functionals: *c,
            };
            let w = ce.eval_with_switching(&switching, &data);
            a[(i, k)] = op.apply(w[2], w[3], w[4]);
        }
        b[i] = op.load;
    }
    Ok((a, b))
}

/// Deflection model produced by [`solve`].
#[derive(Debug, Clone)]
pub struct DflTfcSolution {
    pub result: SolveResult,
    pub config: BeamConfig,
    ce: ConstrainedExpression,
    order: usize,
}

impl DflTfcSolution {
    pub fn constrained_expression(&self) -> &ConstrainedExpression {
        &self.ce
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `W` and its first four derivatives at `x`.
    pub fn jet(&self, x: f64) -> [f64; 5] {
        displacement_jet(&self.result.weights, &self.ce, x)
    }
}

impl Deflection for DflTfcSolution {
    fn displacement(&self, x: f64) -> f64 {
        self.jet(x)[0]
    }
}

/// Constrained-expression jet for a given weight vector.
pub fn displacement_jet(weights: &[f64], ce: &ConstrainedExpression, x: f64) -> [f64; 5] {
    let data = FreeFunctionData {
        at_x: free_function(weights, x),
        functionals: ce.functional_values(&free_function(weights, 0.0), &free_function(weights, 1.0)),
    };
    ce.eval(x, &data)
}

/// Reported deflection `100 * W(X)` of a solved weight vector.
pub fn deflection(result: &SolveResult, ce: &ConstrainedExpression, x: f64) -> f64 {
    100.0 * displacement_jet(&result.weights, ce, x)[0]
}

fn mean_square(r: &DVector<f64>) -> f64 {
    r.norm_squared() / r.len() as f64
}

pub fn solve(cfg: &BeamConfig, order: usize, grid: &CollocationGrid, mode: SolveMode) -> Result<DflTfcSolution> {
    let start = Instant::now();
    let (a, b) = assemble_system(cfg, grid, order)?;
    let result = match mode {
        SolveMode::LeastSquares => {
            let ls = solve_least_squares(&a, &b);
            SolveResult {
                method: Method::DflTfcLeastSquares,
                weights: ls.solution.iter().copied().collect(),
                final_loss: mean_square(&ls.residual),
                wall_time: start.elapsed().as_secs_f64(),
                loss_trace: Vec::new(),
                line_search_failed: false,
                rank: Some(ls.rank),
            }
        }
        SolveMode::Lbfgs(settings) => {
            settings.validate().map_err(Error::Grid)?;
            let n = a.nrows() as f64;
            let at = a.transpose();
            let objective = |w: &[f64]| {
                let r = &a * DVector::from_column_slice(w) - &b;
                let g = (&at * &r) * (2.0 / n);
                (r.norm_squared() / n, g.iter().copied().collect())
            };
            let out = lbfgs_minimize(objective, &vec![0.0; a.ncols()], &settings);
            let r = &a * DVector::from_column_slice(&out.x) - &b;
            SolveResult {
                method: Method::DflTfcLbfgs,
                weights: out.x,
                final_loss: mean_square(&r),
                wall_time: start.elapsed().as_secs_f64(),
                loss_trace: out.trace,
                line_search_failed: out.line_search_failed,
                rank: None,
            }
        }
    };
    Ok(DflTfcSolution {
        result,
        config: *cfg,
        ce: ConstrainedExpression::for_boundary(cfg.bc),
        order,
    })
}

/// Least-squares solve with the default order and grid.
pub fn solve_default(cfg: &BeamConfig) -> Result<DflTfcSolution> {
    solve(cfg, DEFAULT_ORDER, &CollocationGrid::default(), SolveMode::LeastSquares)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::{residual, BoundaryKind};
    use crate::tfc::ce_eval;
    use rand::{Rng, SeedableRng};

    fn table2(bc: BoundaryKind) -> BeamConfig {
        BeamConfig::new(0.3, 4, 0.0, 0.0, 1.0, 10.0, 10.0, bc).unwrap()
    }

    #[test]
    fn grids() {
        let g = CollocationGrid::default();
        assert_eq!(g.len(), 100);
        assert_eq!(g.points()[0], 0.0);
        assert_eq!(g.points()[99], 1.0);
        let c = CollocationGrid::chebyshev_lobatto(9).unwrap();
        assert!(c.points().windows(2).all(|w| w[1] > w[0]));
        assert!((c.points()[4] - 0.5).abs() < 1e-15);
        assert!(CollocationGrid::from_points(vec![0.2, 0.1]).is_err());
        assert!(CollocationGrid::from_points(vec![0.2, 1.1]).is_err());
        assert!(CollocationGrid::uniform(1).is_err());
    }

    #[test]
    fn unloaded_beam_has_zero_rhs_and_zero_solution() {
        let cfg = BeamConfig::new(0.6, 2, 0.2, 0.1, 3.0, 0.0, 4.0, BoundaryKind::CS).unwrap();
        let (_, b) = assemble_system(&cfg, &CollocationGrid::default(), 15).unwrap();
        assert_eq!(b.amax(), 0.0);
        let sol = solve_default(&cfg).unwrap();
        for i in 0..=20 {
            assert!(sol.displacement(i as f64 / 20.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn system_reproduces_direct_residual() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for bc in BoundaryKind::ALL {
            let cfg = table2(bc);
            let grid = CollocationGrid::default();
            let (a, b) = assemble_system(&cfg, &grid, 15).unwrap();
            let ce = ConstrainedExpression::for_boundary(bc);
            for _ in 0..20 {
                let w: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let via_matrix = &a * DVector::from_column_slice(&w) - &b;
                for (i, &x) in grid.points().iter().enumerate() {
                    let data = FreeFunctionData {
                        at_x: free_function(&w, x),
                        functionals: ce.functional_values(&free_function(&w, 0.0), &free_function(&w, 1.0)),
                    };
                    let jet = ce_eval(&ce, x, &data);
                    let direct = residual(x, jet[2], jet[3], jet[4], &cfg);
                    assert!((direct - via_matrix[i]).abs() <= 1e-11 * direct.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn solid_beam_midspan() {
        let cfg = BeamConfig::solid(1.0, 0.0, BoundaryKind::SS).unwrap();
        let sol = solve_default(&cfg).unwrap();
        assert!((sol.deflection(0.5) - 1.3021).abs() <= 5e-4);
        assert!((deflection(&sol.result, sol.constrained_expression(), 0.5) - sol.deflection(0.5)).abs() < 1e-15);
    }
}
