//! Argument parsing and subcommand dispatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_points, BeamArgs, FileConfig, SolverArgs, SolverOptions};
use crate::error::{CliError, CliResult};
use crate::loss::{describe, reproduce_loss_study, study_case, StudyReport};
use crate::record::{write_csv, CsvRow, RunRecord};
use crate::reference::{reproduce_table, ReferenceData};
use crate::runner::{run, MethodArg};
use crate::sweep::{run_sweep, Axis};
use crate::{compare, fixed4};

pub const DEFAULT_AT: [f64; 3] = [0.1, 0.5, 0.9];

#[derive(Debug, Parser)]
#[command(
    name = "taperbeam",
    version,
    about = "Bending of tapered perforated beams on a two-parameter foundation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML or JSON file mirroring the flags; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub beam: BeamArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one configuration and print 100 W at the sample points
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        method: Option<MethodArg>,
        /// Sample points in [0, 1], comma separated
        #[arg(long, value_delimiter = ',')]
        at: Vec<f64>,
        /// Write the run record as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the samples as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Include wall times in the CSV (makes it non-reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// Recompute a published table and compare cell by cell
    Reproduce {
        /// Table id, e.g. T1 or L-SS
        table: String,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Sweep one or two parameters
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to sweep: alpha, n, phi, psi, gamma, q0 or kp
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true, requires_all = ["to", "steps"], conflicts_with = "values")]
        from: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Explicit values instead of a range
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Vec<f64>,
        /// Optional second parameter
        #[arg(long, requires = "values2")]
        param2: Option<String>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values2: Vec<f64>,
        #[arg(long)]
        method: Option<MethodArg>,
        #[arg(long, value_delimiter = ',')]
        at: Vec<f64>,
        /// Worker threads
        #[arg(long, default_value_t = 4)]
        jobs: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// Run every applicable method on one configuration
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        at: Vec<f64>,
        /// Restrict to these methods; the first is the baseline
        #[arg(long, value_delimiter = ',')]
        methods: Vec<MethodArg>,
    },
    /// Loss and time of networks (1 to 3 hidden layers) against Chebyshev
    /// orders 13 to 15 on one configuration
    LossStudy {
        #[command(flatten)]
        common: Common,
        /// Loss bound for the highest Chebyshev order
        #[arg(long, default_value_t = 1e-8)]
        max_loss: f64,
        /// Write the final losses as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Plot the loss histories
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

struct Resolved {
    beam: BeamArgs,
    solver: SolverOptions,
    file: FileConfig,
}

fn resolve(common: &Common) -> CliResult<Resolved> {
    let file = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    Ok(Resolved {
        beam: common.beam.over(&file.beam),
        solver: common.solver.over(&file.solver).resolve()?,
        file,
    })
}

fn method_of(flag: Option<MethodArg>, file: &FileConfig) -> CliResult<MethodArg> {
    match (flag, &file.method) {
        (Some(m), _) => Ok(m),
        (None, Some(s)) => MethodArg::parse(s),
        (None, None) => Ok(MethodArg::DflTfc),
    }
}

fn points_of(flag: &[f64], file: &FileConfig) -> CliResult<Vec<f64>> {
    if !flag.is_empty() {
        parse_points("at", flag)
    } else if let Some(at) = &file.at {
        parse_points("at", at)
    } else {
        Ok(DEFAULT_AT.to_vec())
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)?;
    Ok(())
}

/// Runs a parsed command. `Ok(false)` means the command ran but a check
/// failed.
pub fn execute(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Solve {
            common,
            method,
            at,
            json,
            csv,
            timing,
        } => {
            let r = resolve(&common)?;
            let method = method_of(method, &r.file)?;
            let xs = points_of(&at, &r.file)?;
            let cfg = r.beam.resolve()?;
            let outcome = run(method, &cfg, &r.solver, &xs)?;
            println!("{:>8}  {:>10}", "X", "100 W");
            for (x, w) in &outcome.samples {
                println!("{x:>8}  {:>10}", fixed4(*w));
            }
            if let Some(loss) = outcome.loss {
                println!("loss {loss:.4e}");
            }
            if let Some(path) = json {
                RunRecord::new(cfg, &r.solver, &outcome).write(&path)?;
            }
            if let Some(path) = csv {
                write_csv(&path, &CsvRow::from_outcome("", "", &outcome, timing))?;
            }
            Ok(true)
        }
        Command::Reproduce { table, solver } => {
            let opts = solver.resolve()?;
            let data = ReferenceData::embedded()?;
            if let Some(spec) = data.table(&table) {
                let report = reproduce_table(spec, &opts)?;
                print!("{}", report.render());
                Ok(report.passed())
            } else if let Some(spec) = data.loss_study(&table) {
                let report = reproduce_loss_study(spec, &data.loss_bound, &opts)?;
                print!("{}", report.render());
                Ok(report.passed())
            } else {
                Err(CliError::Reference(format!(
                    "unknown table {table:?}; expected one of {}",
                    data.ids().join(", ")
                )))
            }
        }
        Command::Sweep {
            common,
            param,
            from,
            to,
            steps,
            values,
            param2,
            values2,
            method,
            at,
            jobs,
            csv,
            svg,
            timing,
        } => {
            let r = resolve(&common)?;
            let method = method_of(method, &r.file)?;
            let xs = points_of(&at, &r.file)?;
            let first = match (from, to, steps) {
                (Some(a), Some(b), Some(n)) => Axis::range("from", &param, a, b, n)?,
                _ => Axis::list("values", &param, values)?,
            };
            let mut axes = vec![first];
            if let Some(p2) = param2 {
                axes.push(Axis::list("values2", &p2, values2)?);
            }
            let sweep = run_sweep(&r.beam, axes, method, &r.solver, &xs, jobs)?;
            let rows = sweep.csv_rows(timing);
            match &csv {
                Some(path) => write_csv(path, &rows)?,
                None => print!("{}", crate::record::csv_string(&rows)?),
            }
            if let Some(path) = svg {
                write_text(&path, &sweep.plot().render())?;
            }
            Ok(true)
        }
        Command::Compare { common, at, methods } => {
            let r = resolve(&common)?;
            let xs = points_of(&at, &r.file)?;
            let cfg = r.beam.resolve()?;
            let methods = if methods.is_empty() {
                compare::applicable(&cfg)
            } else {
                methods
            };
            let outcomes = compare::compare(&cfg, &methods, &r.solver, &xs)?;
            print!("{}", compare::render(&outcomes));
            Ok(true)
        }
        Command::LossStudy {
            common,
            max_loss,
            csv,
            svg,
        } => {
            let r = resolve(&common)?;
            let cfg = r.beam.resolve()?;
            let case = study_case(describe(&cfg), cfg, &r.solver, None, None)?;
            let report = StudyReport {
                id: "loss-study".into(),
                max_loss,
                cases: vec![case],
            };
            print!("{}", report.render());
            if let Some(path) = csv {
                let rows: Vec<CsvRow> = report.cases[0]
                    .runs
                    .iter()
                    .flat_map(|run| {
                        let name = if run.family == "pinn" { "hidden_layers" } else { "order" };
                        CsvRow::from_outcome(name, &run.size.to_string(), &run.outcome, true)
                    })
                    .collect();
                write_csv(&path, &rows)?;
            }
            if let Some(path) = svg {
                write_text(&path, &report.plot().render())?;
            }
            Ok(report.passed())
        }
    }
}

/// Entry point shared by the binary: parse, run, map errors to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
