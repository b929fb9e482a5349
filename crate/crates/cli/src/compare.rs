//! Every applicable method on one configuration, side by side.

use std::fmt::Write;

use taperbeam::oracles::AnalyticCase;
use taperbeam::BeamConfig;

use crate::config::SolverOptions;
use crate::error::CliResult;
use crate::runner::{run, MethodArg, Outcome};

/// Methods run by `compare`, the first being the baseline of the diff.
pub fn applicable(cfg: &BeamConfig) -> Vec<MethodArg> {
    MethodArg::ALL
        .into_iter()
        .filter(|m| *m != MethodArg::Analytic || AnalyticCase::for_config(cfg).is_some())
        .collect()
}

pub fn compare(cfg: &BeamConfig, methods: &[MethodArg], opts: &SolverOptions, xs: &[f64]) -> CliResult<Vec<Outcome>> {
    methods.iter().map(|m| run(*m, cfg, opts, xs)).collect()
}

/// Table of `100 W` per method with the largest difference from the first.
pub fn render(outcomes: &[Outcome]) -> String {
    let mut out = String::new();
    let Some(base) = outcomes.first() else {
        return out;
    };
    let _ = write!(out, "{:<14}", "method");
    for (x, _) in &base.samples {
        let _ = write!(out, " {:>10}", format!("X={x}"));
    }
    let _ = writeln!(
        out,
        " {:>12} {:>11} {:>10}",
        format!("max|d {}|", base.method.label()),
        "loss",
        "time [s]"
    );
    for o in outcomes {
        let _ = write!(out, "{:<14}", o.method.label());
        for (_, w) in &o.samples {
            let _ = write!(out, " {:>10}", crate::fixed4(*w));
        }
        let diff = o
            .samples
            .iter()
            .zip(&base.samples)
            .map(|(a, b)| (a.1 - b.1).abs())
            .fold(0.0, f64::max);
        let loss = o.loss.map_or("-".into(), |l| format!("{l:.3e}"));
        let _ = writeln!(out, " {:>12.3e} {loss:>11} {:>10.4}", diff, o.wall_time);
    }
    out
}
