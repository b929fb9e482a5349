use serde::{Deserialize, Serialize};

use super::banded::BandedMatrix;
use crate::beam::{BeamConfig, BoundaryKind, OperatorCoefficients};
use crate::error::{Error, Result};
use crate::solution::Deflection;

pub const MIN_GRID: usize = 201;

/// Nodal displacements on one uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdGrid {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl FdGrid {
    pub fn spacing(&self) -> f64 {
        1.0 / (self.nodes.len() - 1) as f64
    }

    /// Cubic Lagrange interpolation through the four nearest nodes.
    pub fn interpolate(&self, x: f64) -> f64 {
        let m = self.nodes.len() - 1;
        let h = self.spacing();
        let cell = ((x / h).floor() as isize).clamp(0, m as isize - 1) as usize;
        let start = cell.saturating_sub(1).min(m - 3);
        let idx = [start, start + 1, start + 2, start + 3];
        let mut total = 0.0;
        for &i in &idx {
            let mut basis = 1.0;
            for &j in &idx {
                if i != j {
                    basis *= (x - self.nodes[j]) / (self.nodes[i] - self.nodes[j]);
                }
            }
            total += basis * self.values[i];
        }
        total
    }
}

/// Second-order finite-difference solution on a single grid of `grid_size`
/// nodes, with no extrapolation.
///
/// The expanded operator is collocated at nodes `2..=M-2`; the remaining four
/// rows are the boundary conditions, with one-sided stencils for `W'(0)` and
/// `W''` at either end.
pub fn fd_solve_raw(cfg: &BeamConfig, grid_size: usize) -> Result<FdGrid> {
    cfg.validate()?;
    if grid_size < 5 {
        return Err(Error::Grid(format!(
            "{grid_size} nodes cannot carry a five-point stencil"
        )));
    }
    let m = grid_size - 1;
    let h = 1.0 / m as f64;
    let nodes: Vec<f64> = (0..=m).map(|i| i as f64 * h).collect();
    let mut a = BandedMatrix::zeros(grid_size, 2, 2);
    let mut rhs = vec![0.0; grid_size];

    a.set(0, 0, 1.0);
    match cfg.bc {
        BoundaryKind::SS => {
            for (j, c) in [2.0, -5.0, 4.0, -1.0].into_iter().enumerate() {
                a.set(1, j, c);
            }
        }
        BoundaryKind::CS => {
            for (j, c) in [-3.0, 4.0, -1.0].into_iter().enumerate() {
                a.set(1, j, c);
            }
        }
    }
    for (j, c) in [2.0, -5.0, 4.0, -1.0].into_iter().enumerate() {
        a.set(m - 1, m - j, c);
    }
    a.set(m, m, 1.0);

    let d2 = [0.0, 1.0, -2.0, 1.0, 0.0];
    let d3 = [-0.5, 1.0, 0.0, -1.0, 0.5];
    let d4 = [1.0, -4.0, 6.0, -4.0, 1.0];
    for i in 2..=m - 2 {
        let op = OperatorCoefficients::at(nodes[i], cfg);
        for k in 0..5 {
            let c = op.c4 * d4[k] + op.c3 * h * d3[k] + op.c2 * h * h * d2[k];
            a.add(i, i + k - 2, c);
        }
        rhs[i] = h.powi(4) * op.load;
    }
    let values = a.solve(&rhs)?;
    Ok(FdGrid { nodes, values })
}

/// Richardson-extrapolated finite-difference reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdSolution {
    pub config: BeamConfig,
    pub grid: FdGrid,
}

/// Solves on `grid_size` and `2 (grid_size - 1) + 1` nodes and combines
/// them as `(4 fine - coarse) / 3` at the shared nodes.
pub fn fd_solve(cfg: &BeamConfig, grid_size: usize) -> Result<FdSolution> {
    if grid_size < MIN_GRID {
        return Err(Error::GridTooCoarse(grid_size));
    }
    let coarse = fd_solve_raw(cfg, grid_size)?;
    let fine = fd_solve_raw(cfg, 2 * (grid_size - 1) + 1)?;
    let values = coarse
        .values
        .iter()
        .enumerate()
        .map(|(i, c)| (4.0 * fine.values[2 * i] - c) / 3.0)
        .collect();
    Ok(FdSolution {
        config: *cfg,
        grid: FdGrid {
            nodes: coarse.nodes,
            values,
        },
    })
}

impl Deflection for FdSolution {
    fn displacement(&self, x: f64) -> f64 {
        self.grid.interpolate(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::analytic_solid_ss;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solid_beam_matches_closed_form() {
        let cfg = BeamConfig::solid(1.0, 0.0, BoundaryKind::SS).unwrap();
        let fd = fd_solve(&cfg, 401).unwrap();
        assert_abs_diff_eq!(fd.deflection(0.5), 1.302_083_333, epsilon = 1e-4);
        let cfg = BeamConfig::solid(1.0, 10.0, BoundaryKind::SS).unwrap();
        let fd = fd_solve(&cfg, 201).unwrap();
        for x in [0.1, 0.33, 0.5, 0.77] {
            assert_abs_diff_eq!(fd.deflection(x), analytic_solid_ss(x, 1.0, 10.0), epsilon = 1e-4);
        }
    }

    #[test]
    fn unloaded_is_zero() {
        let cfg = BeamConfig::new(0.4, 3, 0.2, 0.1, 1.0, 0.0, 5.0, BoundaryKind::CS).unwrap();
        let fd = fd_solve(&cfg, 201).unwrap();
        assert!(fd.grid.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn clamped_end_has_zero_slope() {
        let cfg = BeamConfig::solid(1.0, 0.0, BoundaryKind::CS).unwrap();
        let fd = fd_solve(&cfg, 401).unwrap();
        // uniform propped cantilever: W = (3X^2 - 5X^3 + 2X^4) / 48
        for x in [0.25_f64, 0.5, 0.75] {
            let exact = 100.0 * (3.0 * x * x - 5.0 * x * x * x + 2.0 * x.powi(4)) / 48.0;
            assert_abs_diff_eq!(fd.deflection(x), exact, epsilon = 1e-4);
        }
    }

    #[test]
    fn second_order_convergence() {
        let cfg = BeamConfig::solid(1.0, 10.0, BoundaryKind::SS).unwrap();
        let exact = analytic_solid_ss(0.5, 1.0, 10.0) / 100.0;
        let e1 = (fd_solve_raw(&cfg, 101).unwrap().interpolate(0.5) - exact).abs();
        let e2 = (fd_solve_raw(&cfg, 201).unwrap().interpolate(0.5) - exact).abs();
        assert!(e1 / e2 > 3.5, "ratio {}", e1 / e2);
    }

    #[test]
    fn interpolation_reproduces_cubics() {
        let nodes: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let grid = FdGrid {
            values: nodes.iter().map(|&x| f(x)).collect(),
            nodes,
        };
        for x in [0.0, 0.03, 0.49, 0.96, 1.0] {
            assert_abs_diff_eq!(grid.interpolate(x), f(x), epsilon = 1e-14);
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let cfg = BeamConfig::solid(1.0, 0.0, BoundaryKind::SS).unwrap();
        assert!(matches!(fd_solve(&cfg, 200), Err(Error::GridTooCoarse(200))));
    }
}
