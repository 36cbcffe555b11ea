use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use todakit_cli::tol::Tolerances;
use todakit_cli::{run, CliError, Command, RunConfig};

/// Isoperiodic deformations, equilibrium measures, Pell certificates, Toda
/// lattice solutions and Schlesinger residue matrices for real hyperelliptic
/// curves.
#[derive(Debug, Parser)]
#[command(name = "todakit", version)]
struct Args {
    /// Command to run.
    #[arg(value_enum)]
    command: Command,
    /// Curve JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    output: PathBuf,
    /// Waypoints and step, e.g. "2:2.5:0.01"; genus > 1 uses comma-separated points.
    #[arg(long, allow_hyphen_values = true)]
    path: Option<String>,
    /// Comma-separated complex a-period vector, e.g. "0.1,-0.2+0.3i".
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Period N (Pell degree, lattice period).
    #[arg(long = "N")]
    n_period: Option<usize>,
    /// Comma-separated band counts, one per band.
    #[arg(long)]
    k: Option<String>,
    /// Lattice sites "lo:hi".
    #[arg(long = "n", allow_hyphen_values = true)]
    n_range: Option<String>,
    /// Times "t" or "start:end:step".
    #[arg(long = "t", allow_hyphen_values = true)]
    t_range: Option<String>,
    /// Tolerance override "key=value"; repeatable.
    #[arg(long = "tol")]
    tol: Vec<String>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Lattice flow: toda or kdv.
    #[arg(long)]
    flow: Option<String>,
    /// Theta phase, comma-separated complex numbers.
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<String>,
    /// Residue-matrix scale t.
    #[arg(long = "t-param", allow_hyphen_values = true)]
    t_param: Option<String>,
}

fn fail(err: &CliError, output: &std::path::Path) -> ExitCode {
    let v = err.to_json();
    let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    if std::fs::create_dir_all(output).is_ok() {
        let _ = std::fs::write(output.join("error.json"), format!("{text}\n"));
    }
    eprintln!("{text}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let scale = match Tolerances::env_scale() {
        Ok(s) => s,
        Err(e) => return fail(&CliError::Input(e), &args.output),
    };
    let output = args.output.clone();
    let cfg = RunConfig {
        command: args.command,
        input: args.input,
        output: args.output,
        path: args.path,
        alpha: args.alpha,
        n_period: args.n_period,
        k: args.k,
        n_range: args.n_range,
        t_range: args.t_range,
        tol: args.tol,
        jobs: args.jobs,
        flow: args.flow,
        z0: args.z0,
        t_param: args.t_param,
        tol_scale: scale,
    };
    match run(cfg) {
        Ok(out) => {
            for c in &out.report.checks {
                println!("{} {} value={:e} tol={:e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.tol);
            }
            println!("{}", if out.report.all_pass() { "OK" } else { "CHECKS FAILED" });
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => fail(&e, &output),
    }
}
