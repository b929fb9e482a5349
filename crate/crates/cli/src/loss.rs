//! Loss and timing comparison between the network baseline and the
//! constrained Chebyshev solver.

use std::fmt::Write;

use taperbeam::BeamConfig;

use crate::config::{parse_bc, SolverOptions};
use crate::error::CliResult;
use crate::reference::{LossBound, LossStudySpec};
use crate::runner::{run, MethodArg, Outcome};
use crate::svg::{LinePlot, Series};

pub const NETWORK_DEPTHS: [usize; 3] = [1, 2, 3];
pub const CHEBYSHEV_ORDERS: [usize; 3] = [13, 14, 15];

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRun {
    /// `"pinn"` or `"dfl-tfc"`
    pub family: &'static str,
    /// Hidden layers or Chebyshev order.
    pub size: usize,
    pub outcome: Outcome,
    /// Published loss for the same setting, when known.
    pub reference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyCase {
    pub label: String,
    pub config: BeamConfig,
    pub runs: Vec<StudyRun>,
}

impl StudyCase {
    fn of<'a>(&'a self, family: &'a str) -> impl Iterator<Item = &'a StudyRun> {
        self.runs.iter().filter(move |r| r.family == family)
    }

    /// Loss of the highest Chebyshev order.
    pub fn best_order_loss(&self) -> Option<f64> {
        self.of("dfl-tfc").max_by_key(|r| r.size).and_then(|r| r.outcome.loss)
    }

    pub fn loss_ok(&self, max_loss: f64) -> bool {
        self.best_order_loss().is_some_and(|l| l <= max_loss)
    }

    /// Every Chebyshev solve finishes faster than every network.
    pub fn faster(&self) -> bool {
        let slowest = self.of("dfl-tfc").map(|r| r.outcome.wall_time).fold(0.0, f64::max);
        let quickest = self
            .of("pinn")
            .map(|r| r.outcome.wall_time)
            .fold(f64::INFINITY, f64::min);
        slowest < quickest
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub id: String,
    pub max_loss: f64,
    pub cases: Vec<StudyCase>,
}

impl StudyReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.loss_ok(self.max_loss) && c.faster())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: network vs Chebyshev loss and time", self.id);
        for case in &self.cases {
            let _ = writeln!(out, "{}", case.label);
            let _ = writeln!(
                out,
                "  {:<8} {:>5} {:>12} {:>12} {:>10}",
                "method", "size", "loss", "published", "time [s]"
            );
            for r in &case.runs {
                let loss = r.outcome.loss.map_or("-".into(), |l| format!("{l:.4e}"));
                let published = r.reference.map_or("-".into(), |l| format!("{l:.4e}"));
                let _ = writeln!(
                    out,
                    "  {:<8} {:>5} {loss:>12} {published:>12} {:>10.4}",
                    r.family, r.size, r.outcome.wall_time
                );
            }
            let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  order-{} loss <= {:.0e}: {}; Chebyshev faster than network: {}",
                CHEBYSHEV_ORDERS[2],
                self.max_loss,
                mark(case.loss_ok(self.max_loss)),
                mark(case.faster())
            );
        }
        let _ = writeln!(out, "{}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    /// Loss traces of every run, log scale.
    pub fn plot(&self) -> LinePlot {
        let series = self
            .cases
            .iter()
            .flat_map(|c| {
                c.runs.iter().map(move |r| Series {
                    label: format!("{} {} {}", c.label, r.family, r.size),
                    points: r
                        .outcome
                        .loss_trace
                        .iter()
                        .enumerate()
                        .map(|(i, l)| (i as f64, *l))
                        .collect(),
                })
            })
            .collect();
        LinePlot {
            title: format!("{} loss history", self.id),
            x_label: "iteration".into(),
            y_label: "loss".into(),
            series,
            log_y: true,
        }
    }
}

pub fn describe(c: &BeamConfig) -> String {
    format!(
        "alpha={} N={} phi={} psi={} gamma={} q0={} kp={} bc={}",
        c.alpha,
        c.n_holes,
        c.phi,
        c.psi,
        c.gamma,
        c.q0,
        c.kp,
        c.bc.label()
    )
}

/// Trains every network depth and solves at every Chebyshev order for one
/// configuration.
pub fn study_case(
    label: String,
    config: BeamConfig,
    opts: &SolverOptions,
    network_reference: Option<&[f64]>,
    chebyshev_reference: Option<&[f64]>,
) -> CliResult<StudyCase> {
    let mut runs = Vec::new();
    for (i, depth) in NETWORK_DEPTHS.into_iter().enumerate() {
        let o = SolverOptions {
            hidden_layers: depth,
            ..opts.clone()
        };
        runs.push(StudyRun {
            family: "pinn",
            size: depth,
            outcome: run(MethodArg::Pinn, &config, &o, &[0.5])?,
            reference: network_reference.and_then(|r| r.get(i).copied()),
        });
    }
    for (i, order) in CHEBYSHEV_ORDERS.into_iter().enumerate() {
        let o = SolverOptions { order, ..opts.clone() };
        runs.push(StudyRun {
            family: "dfl-tfc",
            size: order,
            outcome: run(MethodArg::DflTfc, &config, &o, &[0.5])?,
            reference: chebyshev_reference.and_then(|r| r.get(i).copied()),
        });
    }
    Ok(StudyCase { label, config, runs })
}

/// Runs an embedded loss study.
pub fn reproduce_loss_study(spec: &LossStudySpec, bound: &LossBound, opts: &SolverOptions) -> CliResult<StudyReport> {
    let bc = parse_bc(&spec.bc)?;
    let mut cases = Vec::new();
    for (i, case) in spec.cases.iter().enumerate() {
        let config = case.params.config(bc)?;
        let label = format!("case {}: {}", i + 1, describe(&config));
        cases.push(study_case(
            label,
            config,
            opts,
            Some(&case.network_loss),
            Some(&case.chebyshev_loss),
        )?);
    }
    Ok(StudyReport {
        id: spec.id.clone(),
        max_loss: bound.max_loss,
        cases,
    })
}
