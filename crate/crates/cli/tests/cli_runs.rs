use std::path::Path;
use std::process::Command as Proc;

use serde_json::Value;
use todakit_cli::commands::{emit_trajectory, NO_DEFORMATIONS};
use todakit_cli::{run, Command, RunConfig};
use todakit_core::build_curve;
use todakit_core::isoflow::{integrate_flow, FlowOptions, FlowState};

const G1: &str = r#"{"genus":1,"x":[2],"u":[3]}"#;

fn write_input(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("curve.json");
    std::fs::write(&p, text).unwrap();
    p
}

fn bin(args: &[&str]) -> std::process::Output {
    Proc::new(env!("CARGO_BIN_EXE_todakit")).args(args).output().unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn validate_g1_exits_zero_with_identity_residuals() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), G1);
    let out = d.path().join("out");
    let o = bin(&["validate", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(&out);
    assert_eq!(r["pass"], Value::Bool(true));
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for n in ["residue_v", "residue_uv", "residue_rational"] {
        assert!(names.contains(&n), "{names:?}");
    }
}

#[test]
fn flow_g1_ends_on_the_line_u_equals_x_plus_one() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), G1);
    let mut cfg = RunConfig::new(Command::Flow, input, d.path().join("o"));
    cfg.path = Some("2:2.5:0.01".into());
    let out = run(cfg).unwrap();
    assert_eq!(out.exit_code(), 0);
    let text = std::fs::read_to_string(d.path().join("o/trajectory.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step_index,x_1,u_1,drift_re_1,drift_im_1");
    assert_eq!(lines.len(), 52);
    let last: Vec<f64> = lines[51].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[1] - 2.5).abs() < 1e-12);
    assert!((last[2] - 3.5).abs() < 1e-6);
    let mut prev = f64::NEG_INFINITY;
    for l in &lines[1..] {
        let x: f64 = l.split(',').nth(1).unwrap().parse().unwrap();
        assert!(x > prev);
        prev = x;
    }
}

#[test]
fn emit_trajectory_single_sample_has_one_row() {
    let d = tempfile::tempdir().unwrap();
    let curve = build_curve(1, &[2.0], &[3.0]).unwrap();
    let state = FlowState::new(&curve, &[num_complex::Complex64::new(0.0, 0.0)]).unwrap();
    let traj = integrate_flow(&state, &[vec![2.0]], &FlowOptions::with_step(0.01)).unwrap();
    let p = d.path().join("t.csv");
    emit_trajectory(&traj, &p).unwrap();
    assert_eq!(std::fs::read_to_string(&p).unwrap().lines().count(), 2);
}

#[test]
fn sw_deform_genus0_reports_no_deformations() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), r#"{"genus":0}"#);
    let out = run(RunConfig::new(Command::SwDeform, input, d.path().join("o"))).unwrap();
    assert_eq!(out.exit_code(), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("o/sw_deform.json")).unwrap()).unwrap();
    assert_eq!(v["message"], NO_DEFORMATIONS);
    assert_eq!(v["double_zeros"], 1);
    assert!(v["moduli"].as_array().unwrap().is_empty());
}

#[test]
fn sw_deform_keeps_double_zero_count() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), G1);
    for (n, k, expected) in [(2usize, "1,1", 0u64), (4, "2,2", 2)] {
        let mut cfg = RunConfig::new(Command::SwDeform, input.clone(), d.path().join(format!("o{n}")));
        cfg.n_period = Some(n);
        cfg.k = Some(k.into());
        cfg.path = Some("2:2.3:0.05".into());
        let out = run(cfg).unwrap();
        assert_eq!(out.exit_code(), 0, "{:?}", out.report);
        assert_eq!(report(&d.path().join(format!("o{n}")))["result"]["expected_double_zeros"], expected);
    }
}

#[test]
fn bad_input_exits_two_with_error_json() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), r#"{"genus":1,"x":[0.5],"u":[3]}"#);
    let out = d.path().join("o");
    let o = bin(&["periods", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_str(&std::fs::read_to_string(out.join("error.json")).unwrap()).unwrap();
    assert_eq!(e["error"]["kind"], "input");

    let input = write_input(d.path(), G1);
    let o = bin(&["flow", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap(), "--path", "2:x:0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o =
        bin(&["periods", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap(), "--tol", "bogus=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), G1);
    let out = d.path().join("o");
    let o = bin(&[
        "toda",
        "--input",
        input.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--N",
        "3",
        "--n",
        "-2:2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&out)["pass"], Value::Bool(false));
}

#[test]
fn module_error_exits_one_with_error_json() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), r#"{"genus":2,"x":[2,5],"u":[3,6.5]}"#);
    let out = d.path().join("o");
    let o = bin(&["toda", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap(), "--flow", "kdv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(out.join("error.json").exists());
}

#[test]
fn toda_lattice_is_independent_of_jobs() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), r#"{"genus":2,"x":[2,5],"u":[3,6.5]}"#);
    let mut outs = Vec::new();
    for jobs in [1usize, 4] {
        let mut cfg = RunConfig::new(Command::Toda, input.clone(), d.path().join(format!("j{jobs}")));
        cfg.n_range = Some("-3:3".into());
        cfg.t_range = Some("0:0.5:0.25".into());
        cfg.jobs = jobs;
        assert_eq!(run(cfg).unwrap().exit_code(), 0);
        outs.push(std::fs::read(d.path().join(format!("j{jobs}/lattice.csv"))).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(String::from_utf8_lossy(&outs[0]).lines().count(), 1 + 7 * 3);
}

#[test]
fn tolerance_scale_loosens_and_tightens() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), G1);
    let mut cfg = RunConfig::new(Command::Pell, input.clone(), d.path().join("o"));
    cfg.n_period = Some(2);
    cfg.k = Some("1,1".into());
    cfg.tol_scale = 1e-9;
    let out = run(cfg.clone()).unwrap();
    assert_eq!(out.exit_code(), 1);
    cfg.tol_scale = 1.0;
    cfg.tol = vec!["pell=1e-20".into()];
    assert_eq!(run(cfg).unwrap().exit_code(), 1);
}

#[test]
fn every_command_writes_a_report() {
    let d = tempfile::tempdir().unwrap();
    let input = write_input(d.path(), G1);
    let cases: Vec<(Command, &[&str])> = vec![
        (Command::Periods, &["periods.json"]),
        (Command::Equilibrium, &["measures.json"]),
        (Command::Schlesinger, &["matrices.json"]),
        (Command::Toda, &["lattice.csv", "lattice.json"]),
    ];
    for (cmd, files) in cases {
        let dir = d.path().join(cmd.name());
        let out = run(RunConfig::new(cmd, input.clone(), &dir)).unwrap();
        assert_eq!(out.exit_code(), 0, "{}", cmd.name());
        for f in files {
            assert!(dir.join(f).exists(), "{f}");
        }
        assert_eq!(out.files.last().map(String::as_str), Some("report.json"));
    }
}
