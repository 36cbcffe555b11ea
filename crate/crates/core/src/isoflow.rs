//! Isoperiodic deformations: the first-order flow `∂u_m/∂x_i`, the rational
//! second-order system, the genus-one ODE, RK4 integration with b-period
//! drift monitoring, the Newton period corrector and the identity validators.

use num_complex::Complex64;
use serde::Serialize;

use crate::curve::{build_curve, BranchId, CurveSpec};
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{self, CMat};
use crate::periods::{DifferentialRep, DEFAULT_QUAD_TOL};
use crate::report::Report;

pub use crate::variational::{validate_variational, variational_order};

/// Floor on every rational denominator and on `|Ω_α(P_{u_m})|`.
pub const POLE_FLOOR: f64 = 1e-9;
/// Period residual at which the Newton corrector stops.
pub const NEWTON_TOL: f64 = 1e-10;

const PI: f64 = std::f64::consts::PI;

/// Fibration data of a flow: the curve, `α` and the frozen b-periods of `Ω_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub curve: CurveSpec,
    pub alpha: Vec<Complex64>,
    pub target_b_periods: Vec<Complex64>,
}

impl FlowState {
    /// Freezes the current b-periods of `Ω_α` as the flow target.
    pub fn new(curve: &CurveSpec, alpha: &[Complex64]) -> Result<Self> {
        let frame = Frame::new(curve, alpha, DEFAULT_QUAD_TOL)?;
        Ok(FlowState { curve: curve.clone(), alpha: alpha.to_vec(), target_b_periods: frame.b_periods() })
    }

    /// Uses an explicit target vector.
    pub fn with_target(curve: &CurveSpec, alpha: &[Complex64], target: &[Complex64]) -> Result<Self> {
        let g = curve.genus();
        for len in [alpha.len(), target.len()] {
            if len != g {
                return Err(Error::DimensionMismatch { expected: g, got: len });
            }
        }
        if target.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite target b-period".into()));
        }
        Ok(FlowState { curve: curve.clone(), alpha: alpha.to_vec(), target_b_periods: target.to_vec() })
    }
}

/// `v_m(P_a)` from the curve alone, `φ` values rooted separately.
fn v_value(curve: &CurveSpec, m: usize, a: BranchId) -> Complex64 {
    if a == BranchId::U(m) {
        return Complex64::new(1.0, 0.0);
    }
    let (av, um) = (curve.value(a), curve.u()[m - 1]);
    let (mut num, mut den) = (1.0, 1.0);
    for (b, &ub) in curve.u().iter().enumerate() {
        if b + 1 != m {
            num *= av - ub;
            den *= um - ub;
        }
    }
    curve.phi_at_ramification(a) * num / (curve.phi_at_ramification(BranchId::U(m)) * den)
}

/// `[∂u_m/∂x_i] = -Ω(P_{x_i})·v_m(P_{x_i})/Ω(P_{u_m})` for an arbitrary
/// differential `p du/v`; only ratios of `Ω` values enter.
pub fn first_order_rhs_for(curve: &CurveSpec, diff: &DifferentialRep) -> Result<CMat> {
    let g = curve.genus();
    let at = |a| crate::periods::eval_at_ramification(curve, &diff.coeffs, a);
    let om_u: Vec<Complex64> = (1..=g).map(|m| at(BranchId::U(m))).collect();
    let scale = om_u
        .iter()
        .chain((1..=g).map(|i| at(BranchId::X(i))).collect::<Vec<_>>().iter())
        .fold(0.0f64, |s, z| s.max(z.norm()));
    for (m, z) in om_u.iter().enumerate() {
        if z.norm() < POLE_FLOOR * scale.max(1e-300) || z.norm() == 0.0 {
            return Err(Error::DenominatorVanishes(m + 1));
        }
    }
    Ok((1..=g)
        .map(|m| {
            (1..=g)
                .map(|i| {
                    let xi = BranchId::X(i);
                    -at(xi) * v_value(curve, m, xi) / om_u[m - 1]
                })
                .collect()
        })
        .collect())
}

/// First-order flow matrix `[∂u_m/∂x_i]` (row `m`, column `i`) at the state's curve.
pub fn first_order_rhs(state: &FlowState) -> Result<CMat> {
    let frame = Frame::new(&state.curve, &state.alpha, DEFAULT_QUAD_TOL)?;
    first_order_rhs_for(&state.curve, frame.omega())
}

/// First-order flow matrix from an already computed frame.
pub fn first_order_rhs_frame(frame: &Frame) -> Result<CMat> {
    first_order_rhs_for(frame.curve(), frame.omega())
}

fn real_part(m: &CMat) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(|z| z.re).collect()).collect()
}

fn max_imag(m: &CMat) -> f64 {
    m.iter().flatten().fold(0.0, |s, z| s.max(z.im.abs()))
}

/// Second derivatives of the dependent branch points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondOrder {
    /// `hessian[m][k][n] = ∂²u_m/∂x_k∂x_n` (0-based), symmetric in `(k, n)`.
    pub hessian: Vec<Vec<Vec<f64>>>,
}

impl SecondOrder {
    /// `∂²u_m/∂x_k²` (0-based).
    pub fn diagonal(&self, m: usize, k: usize) -> f64 {
        self.hessian[m][k][k]
    }
}

fn check_poles(x: &[f64], u: &[f64]) -> Result<()> {
    let mut pts: Vec<(String, f64)> = vec![("0".into(), 0.0), ("1".into(), 1.0)];
    pts.extend(x.iter().enumerate().map(|(i, &v)| (format!("x{}", i + 1), v)));
    pts.extend(u.iter().enumerate().map(|(i, &v)| (format!("u{}", i + 1), v)));
    for i in 0..pts.len() {
        for j in 0..i {
            if (pts[i].1 - pts[j].1).abs() < POLE_FLOOR || !pts[i].1.is_finite() {
                return Err(Error::PoleHit(format!("{} - {}", pts[i].0, pts[j].0)));
            }
        }
    }
    Ok(())
}

/// Right-hand sides of the second-order rational system for `u(x)`.
///
/// `du[m][i] = ∂u_m/∂x_i`. The mixed entries are averaged over `(k, n)` and
/// `(n, k)`; diagonal entries use the separate formula for `∂²u_m/∂x_k²`.
pub fn second_order_rhs(x: &[f64], u: &[f64], du: &[Vec<f64>]) -> Result<SecondOrder> {
    let g = x.len();
    if u.len() != g {
        return Err(Error::DimensionMismatch { expected: g, got: u.len() });
    }
    if du.len() != g || du.iter().any(|r| r.len() != g) {
        return Err(Error::DimensionMismatch { expected: g, got: du.len() });
    }
    if du.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite first derivatives".into()));
    }
    check_poles(x, u)?;
    // px[j] = ∏_α (x_j - u_α), pu[j] = ∏_{α≠j} (u_j - u_α).
    let px: Vec<f64> = x.iter().map(|&xj| u.iter().map(|&ua| xj - ua).product()).collect();
    let pu: Vec<f64> = (0..g).map(|j| (0..g).filter(|&a| a != j).map(|a| u[j] - u[a]).product()).collect();
    let mut hessian = vec![vec![vec![0.0; g]; g]; g];
    for m in 0..g {
        let d = &du[m];
        let um = u[m];
        let a_m: f64 = (0..g).filter(|&j| j != m).map(|j| 1.0 / (um - u[j])).sum();
        let s: f64 = d.iter().sum();
        let sx: f64 = x.iter().zip(d).map(|(xi, di)| xi * di).sum();
        let t1: f64 = (0..g).map(|j| d[j] / px[j]).sum::<f64>() * pu[m];
        let t2: f64 = (0..g)
            .filter(|&j| j != m)
            .map(|j| (0..g).map(|i| d[i] * (1.0 / (um - u[j]) - 1.0 / (x[i] - u[j]))).sum::<f64>() / pu[j])
            .sum::<f64>()
            * pu[m];
        let cubic = s * (a_m + 1.0 / um) + sx / (um * (um - 1.0)) + t1 + t2;
        let cross = |k: usize, n: usize| -> f64 {
            (0..g).filter(|&a| a != m).map(|a| (1.0 / (um - u[a]) - 1.0 / (x[k] - u[a])) * du[a][n]).sum()
        };
        let mixed = |k: usize, n: usize| -> f64 {
            // The x-sum skips j = k and j = n, as the chain rule through the
            // first-order flow requires.
            let sx_u: f64 = (0..g).filter(|&j| j != k && j != n).map(|j| 1.0 / (um - x[j])).sum();
            0.5 * (1.0 / (x[k] - x[n]) - 1.0 / (um - x[n])) * d[k]
                + 0.5 * (1.0 / (x[n] - x[k]) - 1.0 / (um - x[k])) * d[n]
                + 0.5 * (2.0 / um + 2.0 / (um - 1.0) + sx_u - a_m) * d[n] * d[k]
                + 0.25 * d[k] * cross(k, n)
                + 0.25 * d[n] * cross(n, k)
                - 0.5 * d[k] * d[n] * cubic
        };
        for k in 0..g {
            let xk = x[k];
            let dk = d[k];
            let others = |f: &dyn Fn(usize) -> f64| -> f64 { (0..g).filter(|&j| j != k).map(f).sum() };
            let diag = 0.5 * (um / (xk - 1.0) - (um - 1.0) / xk - 1.0 / (xk - um))
                - 0.5 * others(&|j| (1.0 / (xk - um) - 1.0 / (xk - x[j])) * d[j])
                - 0.5
                    * dk
                    * (2.0 / xk + 2.0 / (xk - 1.0) + others(&|a| 1.0 / (xk - x[a]))
                        - (0..g).filter(|&a| a != m).map(|a| 1.0 / (xk - u[a])).sum::<f64>()
                        - 1.0 / (xk - um))
                + 0.5 * (1.0 / xk - 1.0 / (xk - 1.0)) * others(&|i| x[i] * d[i])
                + 0.5 * (1.0 / (xk - um) - 1.0 / xk) * others(&|i| d[i])
                + 0.5
                    * dk
                    * dk
                    * (2.0 / um + 2.0 / (um - 1.0) + others(&|a| 1.0 / (um - x[a])) - a_m + 1.0 / (xk - um))
                + 0.5 * dk * cross(k, k)
                - 0.5 * dk * dk * cubic;
            hessian[m][k][k] = diag;
            for n in 0..k {
                let v = 0.5 * (mixed(k, n) + mixed(n, k));
                hessian[m][k][n] = v;
                hessian[m][n][k] = v;
            }
        }
    }
    Ok(SecondOrder { hessian })
}

/// Right-hand side of the genus-one equation `u'' = F(x, u, u')`.
pub fn genus1_ode_rhs(x: f64, u: f64, up: f64) -> Result<f64> {
    check_poles(&[x], &[u])?;
    let a = 0.5 * (u / (x - 1.0) - (u - 1.0) / x + 1.0 / (u - x));
    let b = -0.5 * up * (2.0 / x + 2.0 / (x - 1.0) + 1.0 / (u - x));
    let c = 0.5 * up * up * (2.0 / u + 2.0 / (u - 1.0) + 1.0 / (x - u));
    let d = -0.5 * up.powi(3) * (x / (u - 1.0) - (x - 1.0) / u + 1.0 / (x - u));
    Ok(a + b + c + d)
}

/// Integration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    /// Nominal step length along the path in x-space.
    pub step: f64,
    /// Halve the step when drift growth per unit path exceeds `drift_rate_tol`.
    pub adaptive: bool,
    pub drift_rate_tol: f64,
    /// Smallest allowed step as a fraction of the nominal step.
    pub min_step_fraction: f64,
    /// Quadrature tolerance for every period evaluation.
    pub quad_tol: f64,
}

impl FlowOptions {
    /// Defaults with the given nominal step.
    pub fn with_step(step: f64) -> Self {
        FlowOptions {
            step,
            adaptive: true,
            drift_rate_tol: 1e-6,
            min_step_fraction: 1.0 / 1024.0,
            quad_tol: DEFAULT_QUAD_TOL,
        }
    }
}

/// One accepted point of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSample {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    /// `∮_b Ω_α - target`.
    pub drift: Vec<Complex64>,
    /// Step length that produced this sample (0 for the initial one).
    pub step: f64,
    /// `|Ω_α(P_{u_m})|`, monitoring the distance to the excluded bad set.
    pub omega_u_abs: Vec<f64>,
}

/// Accepted samples, possibly truncated by an error.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub samples: Vec<FlowSample>,
    /// Error that stopped the integration early.
    pub termination: Option<Error>,
}

impl FlowTrajectory {
    /// Largest drift modulus over all samples.
    pub fn max_drift(&self) -> f64 {
        self.samples.iter().flat_map(|s| s.drift.iter()).fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Last sample.
    pub fn last(&self) -> &FlowSample {
        self.samples.last().expect("trajectory has an initial sample")
    }
}

fn sample(frame: &Frame, target: &[Complex64], step: f64) -> FlowSample {
    let c = frame.curve();
    FlowSample {
        x: c.x().to_vec(),
        u: c.u().to_vec(),
        drift: frame.b_periods().iter().zip(target).map(|(b, t)| b - t).collect(),
        step,
        omega_u_abs: (1..=c.genus()).map(|m| frame.omega_at(BranchId::U(m)).norm()).collect(),
    }
}

fn drift_norm(s: &FlowSample) -> f64 {
    s.drift.iter().fold(0.0, |m, z| m.max(z.norm()))
}

struct Stepper<'a> {
    alpha: &'a [Complex64],
    quad_tol: f64,
    g: usize,
}

impl Stepper<'_> {
    fn frame(&self, x: &[f64], u: &[f64]) -> Result<Frame> {
        let curve = build_curve(self.g, x, u)?;
        Frame::new(&curve, self.alpha, self.quad_tol)
    }

    /// `du/ds = J·dir` with `J` real.
    fn velocity(&self, frame: &Frame, dir: &[f64]) -> Result<Vec<f64>> {
        let j = first_order_rhs_frame(frame)?;
        let scale = j.iter().flatten().fold(1.0f64, |m, z| m.max(z.norm()));
        let im = max_imag(&j);
        if im > 1e-8 * scale {
            return Err(Error::RealityLost(im));
        }
        let jr = real_part(&j);
        Ok(jr.iter().map(|r| r.iter().zip(dir).map(|(a, b)| a * b).sum()).collect())
    }

    /// One RK4 step of length `h` from `(x, u)` along unit direction `dir`.
    fn rk4(&self, f0: &Frame, dir: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let x0 = f0.curve().x().to_vec();
        let u0 = f0.curve().u().to_vec();
        let shift = |v: &[f64], k: &[f64], c: f64| -> Vec<f64> { v.iter().zip(k).map(|(a, b)| a + c * b).collect() };
        let k1 = self.velocity(f0, dir)?;
        let xm = shift(&x0, dir, 0.5 * h);
        let k2 = self.velocity(&self.frame(&xm, &shift(&u0, &k1, 0.5 * h))?, dir)?;
        let k3 = self.velocity(&self.frame(&xm, &shift(&u0, &k2, 0.5 * h))?, dir)?;
        let x1 = shift(&x0, dir, h);
        let k4 = self.velocity(&self.frame(&x1, &shift(&u0, &k3, h))?, dir)?;
        let u1 = (0..self.g).map(|m| u0[m] + h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])).collect();
        Ok((x1, u1))
    }
}

/// Integrates `u` along a piecewise-linear path of x-vectors with RK4 on the
/// first-order flow, recording the b-period drift of `Ω_α` at every sample.
///
/// Errors during integration truncate the trajectory and are stored in
/// [`FlowTrajectory::termination`].
pub fn integrate_flow(state: &FlowState, path: &[Vec<f64>], opts: &FlowOptions) -> Result<FlowTrajectory> {
    let g = state.curve.genus();
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(Error::InvalidInput(format!("step must be positive, got {}", opts.step)));
    }
    if let Some(p) = path.iter().find(|p| p.len() != g) {
        return Err(Error::DimensionMismatch { expected: g, got: p.len() });
    }
    if let Some(first) = path.first() {
        let off = first.iter().zip(state.curve.x()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if off > 1e-12 * (1.0 + first.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            return Err(Error::InvalidInput("path does not start at the current x".into()));
        }
    }
    let stepper = Stepper { alpha: &state.alpha, quad_tol: opts.quad_tol, g };
    let target = &state.target_b_periods;
    let mut frame = Frame::new(&state.curve, &state.alpha, opts.quad_tol)?;
    let mut samples = vec![sample(&frame, target, 0.0)];
    let mut termination = None;
    'path: for seg in path.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        let len = a.iter().zip(b).map(|(p, q)| (q - p).powi(2)).sum::<f64>().sqrt();
        if len == 0.0 {
            continue;
        }
        let dir: Vec<f64> = a.iter().zip(b).map(|(p, q)| (q - p) / len).collect();
        let n = ((len / opts.step) - 1e-9).ceil().max(1.0) as usize;
        let h_nom = len / n as f64;
        for j in 0..n {
            // Advance from s = j·h_nom to (j+1)·h_nom, halving on drift growth.
            let s_end = (j + 1) as f64 * h_nom;
            let mut s = j as f64 * h_nom;
            let mut h = h_nom;
            while s < s_end - 1e-15 * len {
                h = h.min(s_end - s);
                let attempt = stepper.rk4(&frame, &dir, h).and_then(|(x1, u1)| {
                    let x1 = if (s + h - s_end).abs() < 1e-15 * len && j + 1 == n { b.clone() } else { x1 };
                    stepper.frame(&x1, &u1)
                });
                let f1 = match attempt {
                    Ok(f) => f,
                    Err(e) => {
                        termination = Some(e);
                        break 'path;
                    }
                };
                let cand = sample(&f1, target, h);
                let growth = (drift_norm(&cand) - drift_norm(samples.last().unwrap())) / h;
                if opts.adaptive && growth > opts.drift_rate_tol && h > opts.step * opts.min_step_fraction {
                    h *= 0.5;
                    continue;
                }
                s += h;
                frame = f1;
                samples.push(cand);
            }
        }
    }
    Ok(FlowTrajectory { samples, termination })
}

/// Newton controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub quad_tol: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { quad_tol: DEFAULT_QUAD_TOL, residual_tol: NEWTON_TOL, max_iter: 50 }
    }
}

/// Jacobian `J[k][j] = ∂(∮_{b_k}Ω_α)/∂u_j = πi·Ω_α(P_{u_j})·ω_k(P_{u_j})`.
pub fn period_jacobian(frame: &Frame) -> CMat {
    let g = frame.genus();
    let pi_i = Complex64::new(0.0, PI);
    (1..=g)
        .map(|k| {
            (1..=g)
                .map(|j| {
                    let uj = BranchId::U(j);
                    pi_i * frame.omega_at(uj) * frame.hol_at(k, uj)
                })
                .collect()
        })
        .collect()
}

fn residual(frame: &Frame, target: &[Complex64]) -> (Vec<Complex64>, f64) {
    let r: Vec<Complex64> = frame.b_periods().iter().zip(target).map(|(b, t)| b - t).collect();
    let n = r.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    (r, n)
}

/// Solves `∮_{b_k}Ω_α(x_new, u) = target_k` for `u`, starting from the curve's `u`.
pub fn newton_period_corrector(
    curve: &CurveSpec,
    alpha: &[Complex64],
    target: &[Complex64],
    x_new: &[f64],
) -> Result<Vec<f64>> {
    newton_period_corrector_with(curve, alpha, target, x_new, &NewtonOptions::default())
}

/// [`newton_period_corrector`] with explicit controls.
pub fn newton_period_corrector_with(
    curve: &CurveSpec,
    alpha: &[Complex64],
    target: &[Complex64],
    x_new: &[f64],
    opts: &NewtonOptions,
) -> Result<Vec<f64>> {
    let g = curve.genus();
    if x_new.len() != g {
        return Err(Error::DimensionMismatch { expected: g, got: x_new.len() });
    }
    if target.len() != g {
        return Err(Error::DimensionMismatch { expected: g, got: target.len() });
    }
    let mut u = curve.u().to_vec();
    let mut frame = Frame::new(&build_curve(g, x_new, &u)?, alpha, opts.quad_tol)?;
    let (mut r, mut rn) = residual(&frame, target);
    let mut stepped = false;
    for it in 0..opts.max_iter {
        if rn <= opts.residual_tol && (!stepped || it > 0 && rn <= opts.residual_tol * 1e-3) {
            return Ok(u);
        }
        let j = period_jacobian(&frame);
        let colnorm: f64 = (0..g).map(|c| (0..g).map(|k| j[k][c].norm_sqr()).sum::<f64>().sqrt()).product();
        let det = linalg::det(&j).norm();
        if det < 1e-14 * colnorm || det == 0.0 {
            return Err(Error::SingularJacobian(det));
        }
        let rhs: Vec<Complex64> = r.iter().map(|z| -z).collect();
        let delta = linalg::solve(&j, &rhs)?;
        let mut lambda = 1.0;
        let (next_frame, next_u) = loop {
            let cand: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a + lambda * d.re).collect();
            match build_curve(g, x_new, &cand).and_then(|c| Frame::new(&c, alpha, opts.quad_tol)) {
                Ok(f) => break (f, cand),
                Err(e) if lambda < 1e-6 => return Err(e),
                Err(_) => lambda *= 0.5,
            }
        };
        let converged_before = rn <= opts.residual_tol;
        frame = next_frame;
        u = next_u;
        stepped = true;
        let (r2, rn2) = residual(&frame, target);
        r = r2;
        rn = rn2;
        // One polishing step past the tolerance is enough for quadratic convergence.
        if converged_before {
            return Ok(u);
        }
    }
    if rn <= opts.residual_tol {
        return Ok(u);
    }
    Err(Error::NewtonDiverged { iterations: opts.max_iter, residual: rn })
}

/// Both sides of `Σ_k 1/((x-u_k)∏_{α≠k}(u_k-u_α)) = 1/∏(x-u_α)`.
pub fn rational_identity_sides(u: &[f64], x: f64) -> (f64, f64) {
    let m = u.len();
    let lhs = (0..m)
        .map(|k| {
            let p: f64 = (0..m).filter(|&a| a != k).map(|a| u[k] - u[a]).product();
            1.0 / ((x - u[k]) * p)
        })
        .sum();
    let rhs = 1.0 / u.iter().map(|ua| x - ua).product::<f64>();
    (lhs, rhs)
}

/// Both sides of the second rational identity for index `m` (1-based).
pub fn rational_identity_shifted_sides(u: &[f64], m: usize, x: f64) -> (f64, f64) {
    let n = u.len();
    let mi = m - 1;
    let prod_excl = |k: usize| -> f64 { (0..n).filter(|&a| a != k).map(|a| u[k] - u[a]).product() };
    let lhs = (0..n).filter(|&k| k != mi).map(|k| 1.0 / ((u[k] - x) * (u[k] - u[mi]) * prod_excl(k))).sum();
    let um = u[mi];
    let pm = prod_excl(mi);
    let s: f64 = (0..n).filter(|&a| a != mi).map(|a| 1.0 / (um - u[a])).sum();
    let full: f64 = u.iter().map(|uk| x - uk).product();
    let rhs = s / ((um - x) * pm) + 1.0 / ((um - x) * full) + 1.0 / ((um - x).powi(2) * pm);
    (lhs, rhs)
}

fn rel(lhs: Complex64, rhs: Complex64, scale: f64) -> f64 {
    (lhs - rhs).norm() / scale.max(1.0)
}

/// Evaluation points in `(0, u_g + 1)` from the golden-ratio sequence, kept
/// away from the u-set.
fn probe_points(curve: &CurveSpec, count: usize) -> Vec<f64> {
    let hi = curve.u()[curve.genus() - 1] + 1.0;
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    (1..)
        .map(|k| (k as f64 * phi).fract() * hi)
        .filter(|x| curve.u().iter().all(|u| (x - u).abs() > 1e-2))
        .take(count)
        .collect()
}

/// Right-hand side of the rational expression for
/// `res_{P_{u_m}}Ωφ/((u-u_m)du) / (Ω(P_{u_m})φ(P_{u_m}))` in terms of `∂u_m/∂x_i`.
pub fn residue_rational_rhs(x: &[f64], u: &[f64], d: &[Complex64], m: usize) -> Complex64 {
    let g = x.len();
    let mi = m - 1;
    let um = u[mi];
    let pu = |j: usize| -> f64 { (0..g).filter(|&a| a != j).map(|a| u[j] - u[a]).product() };
    let pm = pu(mi);
    let t1: Complex64 = (0..g).map(|j| d[j] / u.iter().map(|ua| x[j] - ua).product::<f64>()).sum::<Complex64>() * pm;
    let s: Complex64 = d.iter().sum();
    let sx: Complex64 = x.iter().zip(d).map(|(xi, di)| xi * di).sum();
    let am: f64 = (0..g).filter(|&j| j != mi).map(|j| 1.0 / (um - u[j])).sum();
    let t2: Complex64 = (0..g)
        .filter(|&j| j != mi)
        .map(|j| (0..g).map(|i| d[i] * (1.0 / (um - u[j]) - 1.0 / (x[i] - u[j]))).sum::<Complex64>() / pu(j))
        .sum::<Complex64>()
        * pm;
    0.5 * t1 + 0.5 * (s - 1.0) * am + (s - 1.0) / (2.0 * um) + (sx / um - 1.0) / (2.0 * (um - 1.0)) + 0.5 * t2
}

/// Residue and rational identities on one curve. Values are maximal
/// discrepancies, scaled by the largest term where the terms can be large.
pub fn validate_identities(curve: &CurveSpec, alpha: &[Complex64]) -> Result<Report> {
    let frame = Frame::new(curve, alpha, DEFAULT_QUAD_TOL)?;
    validate_identities_frame(&frame)
}

/// [`validate_identities`] on an existing frame.
pub fn validate_identities_frame(frame: &Frame) -> Result<Report> {
    let curve = frame.curve();
    let g = curve.genus();
    let ids = curve.branch_ids();
    let mut report = Report::default();

    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    for x in probe_points(curve, 16) {
        let (l, r) = rational_identity_sides(curve.u(), x);
        e1 = e1.max((l - r).abs() / r.abs().max(1.0));
        for m in 1..=g {
            let (l, r) = rational_identity_shifted_sides(curve.u(), m, x);
            e2 = e2.max((l - r).abs() / r.abs().max(1.0));
        }
    }
    report.push("rational_sum", e1, 1e-12);
    report.push("rational_sum_shifted", e2, 1e-12);

    let du = first_order_rhs_frame(frame)?;
    let (mut r3, mut r4, mut r5, mut r6, mut rm) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for m in 1..=g {
        let um_id = BranchId::U(m);
        let um = curve.value(um_id);
        let others: Vec<BranchId> = ids.iter().copied().filter(|&a| a != um_id).collect();

        let terms3: Vec<Complex64> =
            others.iter().map(|&a| 0.5 * frame.omega_at(a) * frame.phi_at(a) / (curve.value(a) - um)).collect();
        let res_phi = frame.res_omega_phi(um_id);
        let sc3 = terms3.iter().fold(res_phi.norm(), |s, z| s.max(z.norm()));
        r3 = r3.max(rel(terms3.iter().sum::<Complex64>(), -res_phi, sc3));

        let mut terms4 = Vec::new();
        for &a in &others {
            terms4.push(0.5 * frame.omega_at(a) * frame.w(a, um_id)?);
        }
        let res4 = frame.res_omega_w(um_id);
        let sc4 = terms4.iter().fold(res4.norm(), |s, z| s.max(z.norm()));
        r4 = r4.max(rel(terms4.iter().sum::<Complex64>(), -res4, sc4));

        let ov = |a: BranchId| frame.omega_at(a) * frame.v_at(m, a);
        let mut t5 = vec![ov(BranchId::Zero), ov(BranchId::One), frame.omega_at(um_id)];
        let mut t6 = vec![ov(BranchId::One), um * frame.omega_at(um_id)];
        for i in 1..=g {
            let xi = BranchId::X(i);
            t5.push(ov(xi));
            t6.push(curve.value(xi) * ov(xi));
        }
        let sc = |t: &[Complex64]| t.iter().fold(0.0f64, |s, z| s.max(z.norm()));
        r5 = r5.max(t5.iter().sum::<Complex64>().norm() / sc(&t5).max(1.0));
        r6 = r6.max(t6.iter().sum::<Complex64>().norm() / sc(&t6).max(1.0));

        let lhs = res_phi / (frame.omega_at(um_id) * frame.phi_at(um_id));
        let rhs = residue_rational_rhs(curve.x(), curve.u(), &du[m - 1], m);
        rm = rm.max(rel(lhs, rhs, lhs.norm()));
    }
    report.push("residue_phi", r3, 1e-8);
    report.push("residue_w", r4, 1e-8);
    report.push("residue_v", r5, 1e-8);
    report.push("residue_uv", r6, 1e-8);
    report.push("residue_rational", rm, 1e-7);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> CurveSpec {
        build_curve(1, &[2.0], &[3.0]).unwrap()
    }

    fn zero(g: usize) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); g]
    }

    #[test]
    fn g1_first_order_is_one() {
        let st = FlowState::new(&g1(), &zero(1)).unwrap();
        let j = first_order_rhs(&st).unwrap();
        assert!((j[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-8, "{:?}", j);
    }

    #[test]
    fn genus1_ode_vanishes_on_linear_family() {
        assert!(genus1_ode_rhs(2.0, 3.0, 1.0).unwrap().abs() < 1e-12);
        assert!(genus1_ode_rhs(5.0, 6.0, 1.0).unwrap().abs() < 1e-12);
        assert!(matches!(genus1_ode_rhs(1.0, 3.0, 1.0), Err(Error::PoleHit(_))));
    }

    #[test]
    fn second_order_matches_genus1_ode() {
        for &(x, u, up) in &[(2.0, 3.0, 1.0), (2.5, 4.0, 0.3), (1.7, 2.2, -1.4)] {
            let s = second_order_rhs(&[x], &[u], &[vec![up]]).unwrap();
            let o = genus1_ode_rhs(x, u, up).unwrap();
            assert!((s.diagonal(0, 0) - o).abs() < 1e-12 * (1.0 + o.abs()));
        }
    }

    #[test]
    fn rational_identities() {
        let (l, r) = rational_identity_sides(&[3.0], 2.0);
        assert!((l + 1.0).abs() < 1e-15 && (r + 1.0).abs() < 1e-15);
        let u = [2.0, 3.5, 7.0];
        for m in 1..=3 {
            let (l, r) = rational_identity_shifted_sides(&u, m, 0.4);
            assert!((l - r).abs() < 1e-13 * r.abs().max(1.0), "m={m}: {l} vs {r}");
        }
    }

    #[test]
    fn newton_fixed_point_and_g1_family() {
        let c = g1();
        let target = [Complex64::new(0.0, PI)];
        let u = newton_period_corrector(&c, &zero(1), &target, &[2.0]).unwrap();
        assert!((u[0] - 3.0).abs() < 1e-12);
        let u = newton_period_corrector(&c, &zero(1), &target, &[2.1]).unwrap();
        assert!((u[0] - 3.1).abs() < 1e-8, "{u:?}");
    }
}
