//! Command runners: parse inputs, call the library, write artifacts, report.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;
use todakit_core::curve::build_curve;
use todakit_core::equilibrium::{
    bperiods_to_measures, equilibrium_measures, isoequilibrium_flow, measure_report, measures_to_bperiods,
    RATIONAL_N_MAX,
};
use todakit_core::frame::Frame;
use todakit_core::isoflow::{
    integrate_flow, validate_identities, validate_variational, FlowOptions, FlowState, FlowTrajectory,
};
use todakit_core::json::{c as cjson, cvec};
use todakit_core::pell::{chebyshev_from_curve, default_grid, double_zeros, pell_residual_with_rhs, signature_on};
use todakit_core::periods::Periods;
use todakit_core::report::Report;
use todakit_core::schlesinger::{build_residue_matrices, constrained_residual, sum_rule_error};
use todakit_core::theta::{
    division_point, lattice_residual, params_json, periodicity_check, synthesize, toda_solution, LatticeFlow,
    DEFAULT_TIME_STEP,
};
use todakit_core::{CurveSpec, Error as CoreError};

use crate::parse::{
    parse_alpha, parse_complex, parse_curve_input, parse_curve_json, parse_k_list, parse_n_range, parse_path_spec,
    parse_t_range, parse_tol, CurveInput, InputError, PathSpec,
};
use crate::tol::Tolerances;

/// Available commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Periods,
    Flow,
    Equilibrium,
    Pell,
    Toda,
    Schlesinger,
    Validate,
    SwDeform,
}

impl Command {
    /// Name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            Command::Periods => "periods",
            Command::Flow => "flow",
            Command::Equilibrium => "equilibrium",
            Command::Pell => "pell",
            Command::Toda => "toda",
            Command::Schlesinger => "schlesinger",
            Command::Validate => "validate",
            Command::SwDeform => "sw-deform",
        }
    }
}

/// Everything a run needs; option values are still unparsed text.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub output: PathBuf,
    pub path: Option<String>,
    pub alpha: Option<String>,
    pub n_period: Option<usize>,
    pub k: Option<String>,
    pub n_range: Option<String>,
    pub t_range: Option<String>,
    pub tol: Vec<String>,
    pub jobs: usize,
    /// `toda` or `kdv` for the lattice command.
    pub flow: Option<String>,
    /// Theta phase, comma-separated complex numbers.
    pub z0: Option<String>,
    /// Scale `t` of the residue matrices.
    pub t_param: Option<String>,
    /// Global tolerance multiplier.
    pub tol_scale: f64,
}

impl RunConfig {
    /// A config with only the required fields set.
    pub fn new(command: Command, input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            input: input.into(),
            output: output.into(),
            path: None,
            alpha: None,
            n_period: None,
            k: None,
            n_range: None,
            t_range: None,
            tol: Vec::new(),
            jobs: 1,
            flow: None,
            z0: None,
            t_param: None,
            tol_scale: 1.0,
        }
    }
}

/// Failure of a run.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Module(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for input and i/o errors, 1 for module errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Module(_) => 1,
        }
    }

    /// `{"error": {"kind", "message"}}`.
    pub fn to_json(&self) -> Value {
        let kind = match self {
            CliError::Input(_) => "input".to_string(),
            CliError::Io(_) => "io".to_string(),
            CliError::Module(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("module").to_string()
            }
        };
        json!({ "error": { "kind": kind, "message": self.to_string() } })
    }
}

fn io(e: std::io::Error, p: &Path) -> CliError {
    CliError::Io(format!("{}: {e}", p.display()))
}

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    /// Artifact file names, in write order.
    pub files: Vec<String>,
}

impl Outcome {
    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.all_pass() {
            0
        } else {
            1
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    tol: Tolerances,
    files: Vec<String>,
    pool: rayon::ThreadPool,
}

impl Ctx {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let p = self.cfg.output.join(name);
        fs::write(&p, contents).map_err(|e| io(e, &p))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn write_json(&mut self, name: &str, v: &Value) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
        s.push('\n');
        self.write(name, &s)
    }

    fn write_csv(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
        for r in rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        self.write(name, &String::from_utf8(bytes).expect("CSV is UTF-8"))
    }

    fn report(&mut self, rep: &Report, extra: Value) -> Result<(), CliError> {
        let v = json!({
            "command": self.cfg.command.name(),
            "pass": rep.all_pass(),
            "checks": rep.checks,
            "tolerances": self.tol.effective(),
            "result": extra,
        });
        self.write_json("report.json", &v)
    }

    fn input_text(&self) -> Result<String, CliError> {
        fs::read_to_string(&self.cfg.input).map_err(|e| io(e, &self.cfg.input))
    }

    fn curve(&self) -> Result<CurveSpec, CliError> {
        Ok(parse_curve_json(&self.input_text()?)?)
    }

    fn alpha(&self, g: usize) -> Result<Vec<Complex64>, CliError> {
        match &self.cfg.alpha {
            Some(s) => Ok(parse_alpha(s, g)?),
            None => Ok(vec![Complex64::new(0.0, 0.0); g]),
        }
    }

    fn path(&self, g: usize) -> Result<PathSpec, CliError> {
        let s = self.cfg.path.as_deref().ok_or_else(|| InputError::new("path spec", "--path is required"))?;
        Ok(parse_path_spec(s, g)?)
    }

    fn pell_args(&self) -> Result<(usize, Vec<usize>), CliError> {
        let n = self.cfg.n_period.ok_or_else(|| InputError::new("N", "--N is required"))?;
        let k = self.cfg.k.as_deref().ok_or_else(|| InputError::new("k list", "--k is required"))?;
        Ok((n, parse_k_list(k)?))
    }
}

/// Formats a float for CSV: shortest round-trip representation.
fn num(v: f64) -> String {
    format!("{v:?}")
}

/// Runs a command and writes its artifacts into `cfg.output`.
pub fn run(cfg: RunConfig) -> Result<Outcome, CliError> {
    let overrides = cfg.tol.iter().map(|s| parse_tol(s)).collect::<Result<Vec<_>, _>>()?;
    let tol = Tolerances::new(&overrides, cfg.tol_scale)?;
    if cfg.jobs == 0 {
        return Err(InputError::new("jobs", "must be at least 1").into());
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().map_err(|e| CliError::Io(e.to_string()))?;
    fs::create_dir_all(&cfg.output).map_err(|e| io(e, &cfg.output))?;
    let mut ctx = Ctx { cfg, tol, files: Vec::new(), pool };
    let report = match ctx.cfg.command {
        Command::Periods => periods(&mut ctx)?,
        Command::Flow => flow(&mut ctx)?,
        Command::Equilibrium => equilibrium(&mut ctx)?,
        Command::Pell => pell(&mut ctx)?,
        Command::Toda => toda(&mut ctx)?,
        Command::Schlesinger => schlesinger(&mut ctx)?,
        Command::Validate => validate(&mut ctx)?,
        Command::SwDeform => sw_deform(&mut ctx)?,
    };
    Ok(Outcome { report, files: ctx.files })
}

fn periods(ctx: &mut Ctx) -> Result<Report, CliError> {
    let curve = ctx.curve()?;
    let p = Periods::compute(&curve, ctx.tol.get("quad"))?;
    let b = &p.data().riemann;
    let g = curve.genus();
    let mut asym = 0.0f64;
    for i in 0..g {
        for j in 0..g {
            asym = asym.max((b[i][j] - b[j][i]).norm());
        }
    }
    let mut rep = Report::default();
    rep.push("riemann_matrix_symmetry", asym, ctx.tol.get("identity"));
    ctx.write_json("periods.json", &p.data().to_json())?;
    ctx.report(&rep, json!({ "genus": g }))?;
    Ok(rep)
}

fn trajectory_rows(traj: &FlowTrajectory) -> Vec<Vec<String>> {
    traj.samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut row = vec![i.to_string()];
            row.extend(s.x.iter().map(|v| num(*v)));
            row.extend(s.u.iter().map(|v| num(*v)));
            for d in &s.drift {
                row.push(num(d.re));
                row.push(num(d.im));
            }
            row
        })
        .collect()
}

fn trajectory_header(g: usize) -> Vec<String> {
    let mut h = vec!["step_index".to_string()];
    h.extend((1..=g).map(|i| format!("x_{i}")));
    h.extend((1..=g).map(|i| format!("u_{i}")));
    for i in 1..=g {
        h.push(format!("drift_re_{i}"));
        h.push(format!("drift_im_{i}"));
    }
    h
}

/// Writes a trajectory CSV with the standard columns.
pub fn emit_trajectory(traj: &FlowTrajectory, path: &Path) -> Result<(), CliError> {
    let g = traj.samples.first().map(|s| s.x.len()).ok_or_else(|| CliError::Io("empty trajectory".into()))?;
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(e.to_string()))?;
    w.write_record(trajectory_header(g)).map_err(|e| CliError::Io(e.to_string()))?;
    for r in trajectory_rows(traj) {
        w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| io(e, path))
}

fn termination_json(traj: &FlowTrajectory) -> Value {
    traj.termination.as_ref().map(|e| Value::String(e.to_string())).unwrap_or(Value::Null)
}

fn flow(ctx: &mut Ctx) -> Result<Report, CliError> {
    let curve = ctx.curve()?;
    let g = curve.genus();
    let alpha = ctx.alpha(g)?;
    let path = ctx.path(g)?;
    let state = FlowState::new(&curve, &alpha)?;
    let opts = FlowOptions { quad_tol: ctx.tol.get("quad"), ..FlowOptions::with_step(path.step) };
    let traj = integrate_flow(&state, &path.waypoints, &opts)?;
    let mut rep = Report::default();
    rep.push("b_period_drift", traj.max_drift(), ctx.tol.get("drift"));
    rep.push("path_completed", if traj.termination.is_none() { 0.0 } else { 1.0 }, 0.0);
    ctx.write_csv("trajectory.csv", &trajectory_header(g), &trajectory_rows(&traj))?;
    let last = traj.last();
    ctx.report(&rep, json!({ "samples": traj.samples.len(), "final_x": last.x, "final_u": last.u, "termination": termination_json(&traj) }))?;
    Ok(rep)
}

fn equilibrium(ctx: &mut Ctx) -> Result<Report, CliError> {
    let curve = ctx.curve()?;
    let g = curve.genus();
    let measures = measure_report(&curve, RATIONAL_N_MAX, ctx.tol.get("rational"))?;
    let m = equilibrium_measures(&curve)?;
    let mut rep = Report::default();
    rep.push("total_mass", (m.rho.iter().sum::<f64>() - 1.0).abs(), ctx.tol.get("identity"));
    // Dictionary: b-periods of Ω₀ against the measures, both directions.
    let frame = Frame::new(&curve, &vec![Complex64::new(0.0, 0.0); g], ctx.tol.get("quad"))?;
    let from_measures = measures_to_bperiods(&m);
    let direct = frame.b_periods();
    let dict = from_measures.iter().zip(&direct).fold(0.0f64, |s, (a, b)| s.max((a - b).norm()));
    let back = bperiods_to_measures(&direct)?;
    let round = back.rho.iter().zip(&m.rho).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
    rep.push("measure_bperiod_dictionary", dict, ctx.tol.get("division"));
    rep.push("bperiod_measure_round_trip", round, ctx.tol.get("division"));
    ctx.write_json("measures.json", &measures)?;
    let mut extra = json!({ "genus": g });
    if ctx.cfg.path.is_some() {
        let path = ctx.path(g)?;
        let t = isoequilibrium_flow(&curve, &path.waypoints, path.step)?;
        rep.push("measure_drift", t.measure_drift(), ctx.tol.get("measure_drift"));
        rep.push("b_period_drift", t.flow.max_drift(), ctx.tol.get("drift"));
        rep.push("path_completed", if t.flow.termination.is_none() { 0.0 } else { 1.0 }, 0.0);
        let mut header = trajectory_header(g);
        header.extend((0..=g).map(|j| format!("rho_{j}")));
        let mut rows = trajectory_rows(&t.flow);
        for (r, mv) in rows.iter_mut().zip(&t.measures) {
            r.extend(mv.rho.iter().map(|v| num(*v)));
        }
        ctx.write_csv("equilibrium_trajectory.csv", &header, &rows)?;
        extra["termination"] = termination_json(&t.flow);
    }
    ctx.report(&rep, extra)?;
    Ok(rep)
}

fn pell(ctx: &mut Ctx) -> Result<Report, CliError> {
    let curve = ctx.curve()?;
    let (n, k) = ctx.pell_args()?;
    if k.len() != curve.genus() + 1 {
        return Err(InputError::new(
            "k list",
            format!("{} entries, expected one per band ({})", k.len(), curve.genus() + 1),
        )
        .into());
    }
    let cert = chebyshev_from_curve(&curve, n, &k)?;
    let expected = (n as i64 - curve.genus() as i64 - 1).max(0) as f64;
    let mut rep = Report::default();
    rep.push("pell_residual", cert.residual, ctx.tol.get("pell"));
    rep.push("interior_critical_points", (cert.signature.iter().sum::<usize>() as f64 - expected).abs(), 0.0);
    ctx.write_json("certificate.json", &cert.to_json())?;
    ctx.report(&rep, json!({ "N": n, "k": k }))?;
    Ok(rep)
}

fn lattice_flow(s: Option<&str>) -> Result<LatticeFlow, CliError> {
    match s.unwrap_or("toda") {
        "toda" => Ok(LatticeFlow::Toda),
        "kdv" => Ok(LatticeFlow::Kdv),
        other => Err(InputError::new("flow", format!("expected toda or kdv, got {other:?}")).into()),
    }
}

fn toda(ctx: &mut Ctx) -> Result<Report, CliError> {
    let curve = ctx.curve()?;
    let g = curve.genus();
    let flow = lattice_flow(ctx.cfg.flow.as_deref())?;
    let n_range = parse_n_range(ctx.cfg.n_range.as_deref().unwrap_or("-4:4"))?;
    let ts = parse_t_range(ctx.cfg.t_range.as_deref().unwrap_or("0"))?;
    let z0 = match &ctx.cfg.z0 {
        Some(s) => {
            let v = s.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
            if v.len() != g {
                return Err(InputError::new("z0", format!("{} entries, genus is {g}", v.len())).into());
            }
            Some(v)
        }
        None => None,
    };
    let (params, theta) = synthesize(&curve, flow, z0, ctx.tol.get("quad"))?;
    let sites: Vec<(i64, f64)> = ts.iter().flat_map(|&t| (n_range.0..=n_range.1).map(move |n| (n, t))).collect();
    let values = ctx.pool.install(|| {
        sites.par_iter().map(|&(n, t)| toda_solution(&params, &theta, n, t)).collect::<Result<Vec<_>, _>>()
    })?;
    let residuals = ctx.pool.install(|| {
        ts.par_iter()
            .map(|&t| lattice_residual(&params, &theta, n_range, t, DEFAULT_TIME_STEP))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let worst = |f: fn(&todakit_core::theta::LatticeResidual) -> f64| residuals.iter().map(f).fold(0.0f64, f64::max);
    let mut rep = Report::default();
    match flow {
        LatticeFlow::Toda => {
            rep.push("toda_velocity_equation", worst(|r| r.toda_v), ctx.tol.get("eom"));
            rep.push("toda_ratio_equation", worst(|r| r.toda_c), ctx.tol.get("eom"));
        }
        LatticeFlow::Kdv => {
            rep.push("kdv_equation", worst(|r| r.kdv), ctx.tol.get("eom"));
            rep.push("kdv_velocity_vanishes", worst(|r| r.v_max), ctx.tol.get("velocity"));
        }
    }
    let mut extra = json!({ "params": params_json(&params, &theta, flow) });
    if let Some(n) = ctx.cfg.n_period {
        if n == 0 {
            return Err(InputError::new("N", "must be positive").into());
        }
        let per = periodicity_check(&params, &theta, n, n_range, &ts)?;
        rep.push("period_c", per.c_max, ctx.tol.get("period"));
        rep.push("period_v", per.v_max, ctx.tol.get("period"));
        rep.push("division_point", per.division.residual, ctx.tol.get("division"));
        extra["division"] = serde_json::to_value(division_point(&params, &theta, n)).expect("serializable");
    }
    let header: Vec<String> = ["n", "t", "re_c", "im_c", "re_v", "im_v"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = sites
        .iter()
        .zip(&values)
        .map(|(&(n, t), (v, c))| vec![n.to_string(), num(t), num(c.re), num(c.im), num(v.re), num(v.im)])
        .collect();
    ctx.write_csv("lattice.csv", &header, &rows)?;
    let mut sidecar = params_json(&params, &theta, flow);
    sidecar["checks"] = serde_json::to_value(&rep.checks).expect("serializable");
    ctx.write_json("lattice.json", &sidecar)?;
    ctx.report(&rep, extra)?;
    Ok(rep)
}

/// Finite-difference step of the constrained-system check.
pub const SCHLESINGER_STEP: f64 = 1e-4;

fn schlesinger(ctx: &mut Ctx) -> Result<Report, CliError> {
    let curve = ctx.curve()?;
    let g = curve.genus();
    let alpha = ctx.alpha(g)?;
    let t = parse_complex(ctx.cfg.t_param.as_deref().unwrap_or("1"))?;
    let set = build_residue_matrices(&curve, &alpha, t)?;
    let fd = constrained_residual(&curve, &alpha, t, SCHLESINGER_STEP)?;
    let mut rep = Report::default();
    rep.push("sum_rule_base", sum_rule_error(&set, g), ctx.tol.get("sum_rule"));
    for c in fd.checks {
        let tol = match c.name.as_str() {
            "constrained_matrix_form" | "constrained_scalar_form" | "sum_derivative_vanishes" => {
                ctx.tol.get("constrained")
            }
            "sum_rule" => ctx.tol.get("sum_rule"),
            _ => c.tol * ctx.tol.scale(),
        };
        rep.push(c.name, c.value, tol);
    }
    ctx.write_json("matrices.json", &set.to_json())?;
    ctx.report(&rep, json!({ "t": cjson(t), "alpha": cvec(&alpha), "step": SCHLESINGER_STEP }))?;
    Ok(rep)
}

/// Finite-difference step of the variational checks in `validate`.
pub const VALIDATE_STEP: f64 = 1e-4;

fn validate(ctx: &mut Ctx) -> Result<Report, CliError> {
    let curve = ctx.curve()?;
    let alpha = ctx.alpha(curve.genus())?;
    let var_tol = ctx.tol.get("variational");
    let (ids, var) = ctx.pool.install(|| {
        rayon::join(|| validate_identities(&curve, &alpha), || validate_variational(&curve, &alpha, VALIDATE_STEP))
    });
    let mut rep = ctx.tol.rescale(ids?);
    for c in var?.checks {
        rep.push(c.name, c.value, var_tol);
    }
    ctx.report(&rep, json!({ "genus": curve.genus(), "alpha": cvec(&alpha), "step": VALIDATE_STEP }))?;
    Ok(rep)
}

/// Message for the genus-0 singular regime.
pub const NO_DEFORMATIONS: &str = "no nontrivial deformations";

fn sw_deform(ctx: &mut Ctx) -> Result<Report, CliError> {
    let input = parse_curve_input(&ctx.input_text()?)?;
    let curve = match input {
        CurveInput::Genus0 { lambda } => return sw_genus0(ctx, lambda),
        CurveInput::Curve(c) => c,
    };
    let g = curve.genus();
    let (n, k) = ctx.pell_args()?;
    if n < g + 1 {
        return Err(InputError::new("N", format!("N = {n} is below g + 1 = {}", g + 1)).into());
    }
    let path = ctx.path(g)?;
    let zero = vec![Complex64::new(0.0, 0.0); g];
    let state = FlowState::new(&curve, &zero)?;
    let opts = FlowOptions { quad_tol: ctx.tol.get("quad"), ..FlowOptions::with_step(path.step) };
    let traj = integrate_flow(&state, &path.waypoints, &opts)?;
    let expected = n - g - 1;
    let (pell_tol, dz_tol) = (ctx.tol.get("pell"), ctx.tol.get("double_zero"));
    let per_sample = ctx.pool.install(|| {
        traj.samples
            .par_iter()
            .map(|s| -> Result<(f64, usize), CoreError> {
                let c = build_curve(g, &s.x, &s.u)?;
                let cert = chebyshev_from_curve(&c, n, &k)?;
                let zeros = double_zeros(&cert, &c, dz_tol)?;
                Ok((cert.residual, zeros.len()))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut rep = Report::default();
    let max_res = per_sample.iter().map(|p| p.0).fold(0.0f64, f64::max);
    let count_dev = per_sample.iter().map(|p| (p.1 as f64 - expected as f64).abs()).fold(0.0f64, f64::max);
    rep.push("pell_residual", max_res, pell_tol);
    rep.push("double_zero_count", count_dev, 0.0);
    rep.push("b_period_drift", traj.max_drift(), ctx.tol.get("drift"));
    rep.push("path_completed", if traj.termination.is_none() { 0.0 } else { 1.0 }, 0.0);
    let mut header = trajectory_header(g);
    header.push("pell_residual".into());
    header.push("double_zeros".into());
    let mut rows = trajectory_rows(&traj);
    for (r, (res, cnt)) in rows.iter_mut().zip(&per_sample) {
        r.push(num(*res));
        r.push(cnt.to_string());
    }
    ctx.write_csv("sw_deform.csv", &header, &rows)?;
    ctx.report(
        &rep,
        json!({ "N": n, "k": k, "expected_double_zeros": expected, "termination": termination_json(&traj) }),
    )?;
    Ok(rep)
}

/// `P₂ = z² - Λ²`, `Q = z`, `Δ = z² - 2Λ²`: `P² - ΔQ² = Λ⁴` with one double
/// zero of `P² - Λ⁴` at the origin and no moduli to deform.
fn sw_genus0(ctx: &mut Ctx, lambda: f64) -> Result<Report, CliError> {
    let l2 = lambda * lambda;
    let p = [-l2, 0.0, 1.0];
    let q = [0.0, 1.0];
    let delta = [-2.0 * l2, 0.0, 1.0];
    let b = 2f64.sqrt() * lambda;
    let grid = default_grid(&[(-b, b)]);
    let residual = pell_residual_with_rhs(&p, &q, &delta, l2 * l2, &grid);
    let sig = signature_on(&p, &[(-b, b)]);
    let mut rep = Report::default();
    rep.push("pell_residual", residual, ctx.tol.get("pell"));
    rep.push("double_zero_count", (sig[0] as f64 - 1.0).abs(), 0.0);
    let v = json!({
        "genus": 0,
        "lambda": lambda,
        "P": p,
        "Q": q,
        "delta": delta,
        "pell_rhs": l2 * l2,
        "double_zeros": sig[0],
        "moduli": [],
        "message": NO_DEFORMATIONS,
    });
    ctx.write_json("sw_deform.json", &v)?;
    ctx.report(&rep, json!({ "message": NO_DEFORMATIONS }))?;
    Ok(rep)
}
