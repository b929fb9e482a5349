//! Beam and solver flags, their config-file mirror, and resolution into
//! validated model inputs.

use std::path::Path;

use clap::Args;
use serde::{Deserialize, Serialize};
use taperbeam::dfl_tfc::{DEFAULT_ORDER, DEFAULT_POINTS};
use taperbeam::galerkin::DEFAULT_N;
use taperbeam::pinn::DEFAULT_SEED;
use taperbeam::{BeamConfig, BoundaryKind, CollocationGrid, GridKind};

use crate::error::{blame_flag, CliError, CliResult};

pub const SEED_ENV: &str = "TAPERBEAM_SEED";
pub const DEFAULT_FD_GRID: usize = 401;

/// Model parameters. Unset values fall back to the config file, then to a
/// solid, untapered, uniformly loaded S-S beam with `q0 = 1`, `kp = 0`.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct BeamArgs {
    /// Filling ratio in (0, 1]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Number of hole rows
    #[arg(long)]
    pub n: Option<u32>,
    /// Linear taper coefficient
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Quadratic taper coefficient
    #[arg(long, allow_negative_numbers = true)]
    pub psi: Option<f64>,
    /// Exponential load growth rate
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Load amplitude
    #[arg(long, allow_negative_numbers = true)]
    pub q0: Option<f64>,
    /// Foundation shear stiffness
    #[arg(long, allow_negative_numbers = true)]
    pub kp: Option<f64>,
    /// Support kind: ss or cs
    #[arg(long)]
    pub bc: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct SolverArgs {
    /// Highest Chebyshev degree
    #[arg(long)]
    pub order: Option<usize>,
    /// Collocation points
    #[arg(long)]
    pub points: Option<usize>,
    /// Collocation grid: uniform or cgl
    #[arg(long)]
    pub grid: Option<String>,
    /// Galerkin size (basis has n - 4 functions)
    #[arg(long = "galerkin-n")]
    #[serde(rename = "galerkin-n", alias = "galerkin_n")]
    pub galerkin_n: Option<usize>,
    /// Finite-difference nodes (coarse grid of the extrapolation pair)
    #[arg(long = "fd-grid")]
    #[serde(rename = "fd-grid", alias = "fd_grid")]
    pub fd_grid: Option<usize>,
    /// Network initialization seed (default: $TAPERBEAM_SEED, else 42)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Hidden layers of the network baseline
    #[arg(long = "hidden-layers")]
    #[serde(rename = "hidden-layers", alias = "hidden_layers")]
    pub hidden_layers: Option<usize>,
}

/// Everything a config file may set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FileConfig {
    #[serde(flatten)]
    pub beam: BeamArgs,
    #[serde(flatten)]
    pub solver: SolverArgs,
    pub method: Option<String>,
    pub at: Option<Vec<f64>>,
}

impl FileConfig {
    /// Reads TOML, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> CliResult<Self> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: shown.clone(),
            message: e.to_string(),
        })?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed = if is_json {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|message| CliError::Config { path: shown, message })
    }
}

fn or<T: Clone>(flag: &Option<T>, file: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| file.clone())
}

impl BeamArgs {
    /// Flags win over file values.
    pub fn over(&self, file: &BeamArgs) -> BeamArgs {
        BeamArgs {
            alpha: or(&self.alpha, &file.alpha),
            n: or(&self.n, &file.n),
            phi: or(&self.phi, &file.phi),
            psi: or(&self.psi, &file.psi),
            gamma: or(&self.gamma, &file.gamma),
            q0: or(&self.q0, &file.q0),
            kp: or(&self.kp, &file.kp),
            bc: or(&self.bc, &file.bc),
        }
    }

    pub fn resolve(&self) -> CliResult<BeamConfig> {
        let bc = match &self.bc {
            Some(s) => parse_bc(s)?,
            None => BoundaryKind::SS,
        };
        BeamConfig::new(
            self.alpha.unwrap_or(1.0),
            self.n.unwrap_or(0),
            self.phi.unwrap_or(0.0),
            self.psi.unwrap_or(0.0),
            self.gamma.unwrap_or(0.0),
            self.q0.unwrap_or(1.0),
            self.kp.unwrap_or(0.0),
            bc,
        )
        .map_err(blame_flag)
    }
}

pub fn parse_bc(s: &str) -> CliResult<BoundaryKind> {
    s.parse()
        .map_err(|_| CliError::flag("bc", format!("expected ss or cs, got {s:?}")))
}

/// Resolved solver settings, recorded with every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub order: usize,
    pub points: usize,
    pub grid: GridKind,
    pub galerkin_n: usize,
    pub fd_grid: usize,
    pub seed: u64,
    pub hidden_layers: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            points: DEFAULT_POINTS,
            grid: GridKind::Uniform,
            galerkin_n: DEFAULT_N,
            fd_grid: DEFAULT_FD_GRID,
            seed: DEFAULT_SEED,
            hidden_layers: 3,
        }
    }
}

/// Seed from the environment, if set and well formed.
pub fn env_seed() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::flag("seed", format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

impl SolverArgs {
    pub fn over(&self, file: &SolverArgs) -> SolverArgs {
        SolverArgs {
            order: or(&self.order, &file.order),
            points: or(&self.points, &file.points),
            grid: or(&self.grid, &file.grid),
            galerkin_n: or(&self.galerkin_n, &file.galerkin_n),
            fd_grid: or(&self.fd_grid, &file.fd_grid),
            seed: or(&self.seed, &file.seed),
            hidden_layers: or(&self.hidden_layers, &file.hidden_layers),
        }
    }

    /// Precedence for the seed: flag, file, environment, default.
    pub fn resolve(&self) -> CliResult<SolverOptions> {
        let d = SolverOptions::default();
        let grid = match self.grid.as_deref() {
            None | Some("uniform") => GridKind::Uniform,
            Some("cgl") | Some("chebyshev") => GridKind::ChebyshevGaussLobatto,
            Some(other) => {
                return Err(CliError::flag(
                    "grid",
                    format!("expected uniform or cgl, got {other:?}"),
                ))
            }
        };
        let opts = SolverOptions {
            order: self.order.unwrap_or(d.order),
            points: self.points.unwrap_or(d.points),
            grid,
            galerkin_n: self.galerkin_n.unwrap_or(d.galerkin_n),
            fd_grid: self.fd_grid.unwrap_or(d.fd_grid),
            seed: match self.seed {
                Some(s) => s,
                None => env_seed()?.unwrap_or(d.seed),
            },
            hidden_layers: self.hidden_layers.unwrap_or(d.hidden_layers),
        };
        opts.check()?;
        Ok(opts)
    }
}

impl SolverOptions {
    fn check(&self) -> CliResult<()> {
        if self.order < 4 {
            return Err(CliError::flag(
                "order",
                format!("must be at least 4, got {}", self.order),
            ));
        }
        if !(5..=taperbeam::galerkin::MAX_N).contains(&self.galerkin_n) {
            return Err(CliError::flag(
                "galerkin-n",
                format!("must be in 5..=20, got {}", self.galerkin_n),
            ));
        }
        if self.fd_grid < taperbeam::oracles::MIN_GRID {
            return Err(CliError::flag(
                "fd-grid",
                format!("must be at least 201, got {}", self.fd_grid),
            ));
        }
        if self.hidden_layers == 0 {
            return Err(CliError::flag("hidden-layers", "must be at least 1"));
        }
        self.collocation()?;
        Ok(())
    }

    pub fn collocation(&self) -> CliResult<CollocationGrid> {
        CollocationGrid::new(self.grid, self.points).map_err(|e| CliError::flag("points", e.to_string()))
    }
}

/// Parses a comma-separated list of sample points in [0, 1].
pub fn parse_points(flag: &str, raw: &[f64]) -> CliResult<Vec<f64>> {
    if raw.is_empty() {
        return Err(CliError::flag(flag, "at least one point is required"));
    }
    for &x in raw {
        if !(0.0..=1.0).contains(&x) {
            return Err(CliError::flag(flag, format!("points must lie in [0, 1], got {x}")));
        }
    }
    Ok(raw.to_vec())
}
