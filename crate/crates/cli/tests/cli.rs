use std::path::Path;
use std::process::{Command, Output};

use taperbeam_cli::record::{read_csv, RunRecord};

fn taperbeam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taperbeam"))
        .args(args)
        .env_remove("TAPERBEAM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// The `100 W` column of a `solve` printout.
fn printed_values(out: &Output) -> Vec<String> {
    stdout(out)
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("loss"))
        .map(|l| l.split_whitespace().nth(1).unwrap().to_string())
        .collect()
}

const SOLID: [&str; 14] = [
    "--alpha", "1", "--n", "0", "--gamma", "0", "--phi", "0", "--psi", "0", "--q0", "1", "--bc", "ss",
];

#[test]
fn solve_prints_the_solid_beam_midspan() {
    let mut args = vec!["solve"];
    args.extend(SOLID);
    args.extend(["--kp", "0", "--method", "dfl-tfc", "--at", "0.5"]);
    let out = taperbeam(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(printed_values(&out), ["1.3021"]);
}

#[test]
fn unloaded_beam_prints_zeros() {
    for method in ["dfl-tfc", "galerkin", "fd"] {
        let out = taperbeam(&[
            "solve",
            "--q0",
            "0",
            "--alpha",
            "0.4",
            "--n",
            "3",
            "--gamma",
            "2",
            "--kp",
            "5",
            "--bc",
            "cs",
            "--method",
            method,
            "--at",
            "0.1,0.5,0.9",
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert_eq!(printed_values(&out), ["0.0000"; 3], "{method}");
    }
}

#[test]
fn invalid_values_name_the_flag() {
    let out = taperbeam(&["solve", "--alpha", "0"]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("--alpha") && err.contains("(0, 1]"), "{err}");

    let out = taperbeam(&["solve", "--bc", "fixed"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--bc"));

    let out = taperbeam(&["solve", "--at", "1.5"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--at"));

    let out = taperbeam(&["solve", "--method", "analytic", "--bc", "cs"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--method"));

    let out = taperbeam(&["solve", "--fd-grid", "50", "--method", "fd"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--fd-grid"));
}

#[test]
fn reproduce_tables_pass() {
    for table in ["T1", "T3"] {
        let out = taperbeam(&["reproduce", table]);
        assert!(out.status.success(), "{}{}", stdout(&out), stderr(&out));
        assert!(stdout(&out).contains("0 failing"));
    }
    let t1 = stdout(&taperbeam(&["reproduce", "T1"]));
    assert_eq!(t1.lines().filter(|l| l.ends_with(" ok")).count(), 9);
    let t3 = stdout(&taperbeam(&["reproduce", "T3"]));
    assert_eq!(t3.lines().filter(|l| l.ends_with(" ok")).count(), 12);
}

#[test]
fn reproduce_reports_the_suspect_cell_without_failing() {
    let out = taperbeam(&["reproduce", "T6-gammaKp"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).matches("SUSPECT").count(), 2);
}

#[test]
fn unknown_table_is_an_error() {
    let out = taperbeam(&["reproduce", "T9"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("T4-alphaN"));
}

fn sweep_into(dir: &Path, tag: &str) -> (String, String) {
    let csv = dir.join(format!("{tag}.csv"));
    let svg = dir.join(format!("{tag}.svg"));
    let out = taperbeam(&[
        "sweep",
        "--param",
        "gamma",
        "--from",
        "1",
        "--to",
        "5",
        "--steps",
        "9",
        "--n",
        "1",
        "--alpha",
        "0.5",
        "--phi",
        "0.5",
        "--psi",
        "0.5",
        "--q0",
        "1",
        "--kp",
        "10",
        "--at",
        "0.25,0.5,0.75",
        "--jobs",
        "3",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    (
        std::fs::read_to_string(csv).unwrap(),
        std::fs::read_to_string(svg).unwrap(),
    )
}

#[test]
fn sweep_output_is_deterministic_and_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let (csv_a, svg_a) = sweep_into(dir.path(), "a");
    let (csv_b, svg_b) = sweep_into(dir.path(), "b");
    assert_eq!(csv_a, csv_b);
    assert_eq!(svg_a, svg_b);
    assert!(csv_a.starts_with("param_name,param_value,X,W_tilde,method,loss,wall_time_s\n"));
    assert!(svg_a.starts_with("<svg"));

    let rows = read_csv(&dir.path().join("a.csv")).unwrap();
    assert_eq!(rows.len(), 27);
    assert!(rows.iter().all(|r| r.wall_time_s.is_none() && r.param_name == "gamma"));
    for x in [0.25, 0.5, 0.75] {
        let w: Vec<f64> = rows.iter().filter(|r| r.x == x).map(|r| r.w_tilde).collect();
        assert_eq!(w.len(), 9);
        assert!(w.windows(2).all(|p| p[1] > p[0]), "X={x}: {w:?}");
    }
}

#[test]
fn empty_sweep_range_is_rejected() {
    let out = taperbeam(&["sweep", "--param", "kp", "--from", "10", "--to", "1", "--steps", "5"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("empty range"));
    let out = taperbeam(&["sweep", "--param", "kp"]);
    assert!(!out.status.success());
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("beam.toml");
    std::fs::write(&toml, "kp = 10.0\nbc = \"ss\"\nmethod = \"galerkin\"\nat = [0.5]\n").unwrap();
    let cfg = toml.to_str().unwrap();
    let out = taperbeam(&["solve", "--config", cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(printed_values(&out), ["0.6448"]);
    let out = taperbeam(&["solve", "--config", cfg, "--kp", "25"]);
    assert_eq!(printed_values(&out), ["0.3661"]);

    let json = dir.path().join("beam.json");
    std::fs::write(&json, r#"{"kp": 25.0, "at": [0.5], "method": "analytic"}"#).unwrap();
    let out = taperbeam(&["solve", "--config", json.to_str().unwrap()]);
    assert_eq!(printed_values(&out), ["0.3661"]);

    std::fs::write(&toml, "kp = \"stiff\"\n").unwrap();
    let out = taperbeam(&["solve", "--config", cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("beam.toml"));
}

fn recorded_seed(dir: &Path, env: Option<&str>, flag: Option<&str>) -> u64 {
    let json = dir.join("run.json");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_taperbeam"));
    cmd.args(["solve", "--at", "0.5", "--json", json.to_str().unwrap()])
        .env_remove("TAPERBEAM_SEED");
    if let Some(v) = env {
        cmd.env("TAPERBEAM_SEED", v);
    }
    if let Some(v) = flag {
        cmd.args(["--seed", v]);
    }
    assert!(cmd.output().unwrap().status.success());
    RunRecord::read(&json).unwrap().seed
}

#[test]
fn seed_comes_from_flag_then_environment_then_default() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(recorded_seed(dir.path(), None, None), 42);
    assert_eq!(recorded_seed(dir.path(), Some("7"), None), 7);
    assert_eq!(recorded_seed(dir.path(), Some("7"), Some("9")), 9);
}

#[test]
fn environment_seed_drives_network_training() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_taperbeam"));
        cmd.args([
            "solve",
            "--method",
            "pinn",
            "--hidden-layers",
            "1",
            "--kp",
            "10",
            "--at",
            "0.5",
        ])
        .env_remove("TAPERBEAM_SEED");
        if let Some(v) = env {
            cmd.env("TAPERBEAM_SEED", v);
        }
        if let Some(v) = flag {
            cmd.args(["--seed", v]);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        stdout(&out)
    };
    assert_eq!(run(Some("5"), None), run(None, Some("5")));
    let bad = Command::new(env!("CARGO_BIN_EXE_taperbeam"))
        .args(["solve"])
        .env("TAPERBEAM_SEED", "many")
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("--seed"));
}

#[test]
fn solve_writes_record_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("run.json");
    let csv = dir.path().join("run.csv");
    let out = taperbeam(&[
        "solve",
        "--alpha",
        "0.3",
        "--n",
        "4",
        "--gamma",
        "1",
        "--q0",
        "10",
        "--kp",
        "10",
        "--bc",
        "cs",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(printed_values(&out), ["1.0552", "9.5996", "3.8835"]);
    let record = RunRecord::read(&json).unwrap();
    assert_eq!(record.samples.len(), 3);
    assert!(record.final_loss.unwrap() < 1e-8);
    assert!(record.wall_time_s >= 0.0);
    let rows = read_csv(&csv).unwrap();
    assert_eq!(rows.len(), 3);
    assert!((rows[1].w_tilde - 9.5996).abs() < 2e-3);
}

#[test]
fn compare_lists_every_applicable_method() {
    let out = taperbeam(&[
        "compare",
        "--kp",
        "10",
        "--at",
        "0.5",
        "--methods",
        "dfl-tfc,galerkin,fd,analytic",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for label in ["dfl-tfc-ls", "galerkin", "fd", "analytic"] {
        assert!(text.lines().any(|l| l.starts_with(label)), "{text}");
    }
    assert_eq!(text.matches("0.6448").count(), 4);
}

#[test]
fn loss_study_reproduction_passes() {
    let out = taperbeam(&["reproduce", "L-SS"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("case ").count(), 3);
    assert_eq!(text.matches("Chebyshev faster than network: ok").count(), 3);
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn loss_study_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("loss.csv");
    let svg = dir.path().join("loss.svg");
    let out = taperbeam(&[
        "loss-study",
        "--alpha",
        "0.8",
        "--n",
        "2",
        "--phi",
        "0.3",
        "--psi",
        "0.3",
        "--gamma",
        "4",
        "--q0",
        "1",
        "--kp",
        "5",
        "--bc",
        "cs",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let rows = read_csv(&csv).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.loss.is_some() && r.wall_time_s.is_some()));
    assert!(std::fs::read_to_string(svg).unwrap().contains("loss history"));
}
