//! Parameter sweeps over one or two model parameters.

use rayon::prelude::*;

use crate::config::{BeamArgs, SolverOptions};
use crate::error::{CliError, CliResult};
use crate::record::CsvRow;
use crate::runner::{run, MethodArg, Outcome};
use crate::svg::{LinePlot, Series};

pub const PARAMETERS: [&str; 7] = ["alpha", "n", "phi", "psi", "gamma", "q0", "kp"];

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `steps` evenly spaced values from `from` to `to` inclusive.
    pub fn range(flag: &str, name: &str, from: f64, to: f64, steps: usize) -> CliResult<Self> {
        if steps == 0 || !from.is_finite() || !to.is_finite() || (steps == 1 && from != to) {
            return Err(CliError::flag(
                flag,
                format!("empty range {from}..{to} with {steps} steps"),
            ));
        }
        if steps > 1 && from >= to {
            return Err(CliError::flag(flag, format!("empty range {from}..{to}")));
        }
        let values = (0..steps)
            .map(|i| {
                if steps == 1 {
                    from
                } else {
                    from + (to - from) * i as f64 / (steps - 1) as f64
                }
            })
            .collect();
        Self::list(flag, name, values)
    }

    pub fn list(flag: &str, name: &str, values: Vec<f64>) -> CliResult<Self> {
        if !PARAMETERS.contains(&name) {
            return Err(CliError::flag(
                flag,
                format!("unknown parameter {name:?}; expected one of {}", PARAMETERS.join(", ")),
            ));
        }
        if values.is_empty() {
            return Err(CliError::flag(flag, "empty range"));
        }
        if name == "n" && values.iter().any(|v| *v < 0.0 || v.fract() != 0.0) {
            return Err(CliError::flag(flag, "hole rows must be non-negative integers"));
        }
        let mut values = values;
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(Self {
            name: name.to_string(),
            values,
        })
    }
}

fn set(beam: &mut BeamArgs, name: &str, value: f64) {
    match name {
        "alpha" => beam.alpha = Some(value),
        "n" => beam.n = Some(value as u32),
        "phi" => beam.phi = Some(value),
        "psi" => beam.psi = Some(value),
        "gamma" => beam.gamma = Some(value),
        "q0" => beam.q0 = Some(value),
        "kp" => beam.kp = Some(value),
        _ => unreachable!("axis names are checked on construction"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// Value on each axis, in axis order.
    pub values: Vec<f64>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axes: Vec<Axis>,
    pub method: MethodArg,
    pub points: Vec<SweepPoint>,
}

/// Runs one solve per grid point on a pool of `jobs` workers. Points come
/// back in axis order whatever order the workers finish in.
pub fn run_sweep(
    base: &BeamArgs,
    axes: Vec<Axis>,
    method: MethodArg,
    opts: &SolverOptions,
    xs: &[f64],
    jobs: usize,
) -> CliResult<Sweep> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(CliError::flag("param", "sweep one or two parameters"));
    }
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(CliError::flag("param2", "must differ from --param"));
    }
    let mut grid: Vec<Vec<f64>> = axes[0].values.iter().map(|v| vec![*v]).collect();
    if let Some(second) = axes.get(1) {
        grid = grid
            .into_iter()
            .flat_map(|p| second.values.iter().map(move |v| [p.clone(), vec![*v]].concat()))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::flag("jobs", e.to_string()))?;
    let results: Vec<CliResult<SweepPoint>> = pool.install(|| {
        grid.par_iter()
            .map(|values| {
                let mut beam = base.clone();
                for (axis, v) in axes.iter().zip(values) {
                    set(&mut beam, &axis.name, *v);
                }
                let cfg = beam.resolve()?;
                Ok(SweepPoint {
                    values: values.clone(),
                    outcome: run(method, &cfg, opts, xs)?,
                })
            })
            .collect()
    });
    let points = results.into_iter().collect::<CliResult<Vec<_>>>()?;
    Ok(Sweep { axes, method, points })
}

impl Sweep {
    fn param_name(&self) -> String {
        self.axes.iter().map(|a| a.name.as_str()).collect::<Vec<_>>().join(";")
    }

    pub fn csv_rows(&self, timing: bool) -> Vec<CsvRow> {
        let name = self.param_name();
        self.points
            .iter()
            .flat_map(|p| {
                let value = p.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";");
                CsvRow::from_outcome(&name, &value, &p.outcome, timing)
            })
            .collect()
    }

    /// Deflection against the first swept parameter, one curve per sample
    /// point and value of the second parameter.
    pub fn plot(&self) -> LinePlot {
        let mut series = Vec::new();
        let xs: Vec<f64> = self
            .points
            .first()
            .map(|p| p.outcome.samples.iter().map(|s| s.0).collect())
            .unwrap_or_default();
        let seconds: Vec<Option<f64>> = match self.axes.get(1) {
            Some(a) => a.values.iter().map(|v| Some(*v)).collect(),
            None => vec![None],
        };
        for second in &seconds {
            for (k, x) in xs.iter().enumerate() {
                let points = self
                    .points
                    .iter()
                    .filter(|p| second.is_none() || p.values.get(1).copied() == *second)
                    .map(|p| (p.values[0], p.outcome.samples[k].1))
                    .collect();
                let label = match (second, self.axes.get(1)) {
                    (Some(v), Some(a)) => format!("X={x} {}={v}", a.name),
                    _ => format!("X={x}"),
                };
                series.push(Series { label, points });
            }
        }
        LinePlot {
            title: format!("{} deflection vs {}", self.method.name(), self.axes[0].name),
            x_label: self.axes[0].name.clone(),
            y_label: "100 W".into(),
            series,
            log_y: false,
        }
    }
}
