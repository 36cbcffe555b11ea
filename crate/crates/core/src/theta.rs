//! Truncated Riemann theta series and finite-gap Toda / difference-KdV
//! solutions.
//!
//! Convention: `θ(z) = Σ_n exp(πi nᵀ𝔹n + 2πi nᵀz)` with the a-normalized `𝔹`,
//! periodic under `z → z + e_k`. Solutions are evaluated at
//! `z(n,t) = (nU + tV)/(2πi) + z0`, so `U = 2πi·∫_{∞⁻}^{∞⁺} ω` and `V` are
//! b-period vectors in the `2πi`-scaled normalization.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::periods::{abel_between_infinities, DiffKind, DifferentialRep, Periods};
use crate::report::Report;

/// Neglected-tail bound for the theta truncation.
pub const THETA_TAIL_TOL: f64 = 1e-12;
/// `|θ|` below which a synthesis point counts as on the theta divisor.
pub const THETA_DIVISOR_FLOOR: f64 = 1e-12;
/// Default step of the time finite differences.
pub const DEFAULT_TIME_STEP: f64 = 1e-4;
/// Lattice-equation residual bound.
pub const EOM_TOL: f64 = 1e-6;
/// Bound on `|c_{n+N} - c_n|` and `|v_{n+N} - v_n|`.
pub const PERIOD_TOL: f64 = 1e-8;
/// Bound on `|v_n|` in the KdV case.
pub const VELOCITY_TOL: f64 = 1e-8;
/// Distance of `N·U/(2πi)` from the period lattice.
pub const DIVISION_TOL: f64 = 1e-7;

const I2PI: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// Riemann matrix and truncation radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaParams {
    pub riemann: CMat,
    pub radius: i64,
    im_inv: Vec<Vec<f64>>,
}

impl ThetaParams {
    /// Smallest `R` with `exp(-π λ_min R²)(2R+1)^g < tol`.
    pub fn new(riemann: &CMat, tol: f64) -> Result<Self> {
        let g = riemann.len();
        let im: Vec<Vec<f64>> = riemann.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
        let lam = linalg::min_symmetric_eigenvalue(&im);
        if !(lam > 0.0) {
            return Err(Error::InvariantViolation(format!("Im B has eigenvalue {lam}")));
        }
        let mut radius = 1i64;
        while (-PI * lam * (radius as f64).powi(2)).exp() * ((2 * radius + 1) as f64).powi(g as i32) >= tol {
            radius += 1;
        }
        Self::with_radius(riemann, radius)
    }

    /// Explicit truncation radius.
    pub fn with_radius(riemann: &CMat, radius: i64) -> Result<Self> {
        let im: CMat = riemann.iter().map(|r| r.iter().map(|z| Complex64::new(z.im, 0.0)).collect()).collect();
        let inv = linalg::inverse(&im)?;
        let im_inv = inv.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        Ok(ThetaParams { riemann: riemann.clone(), radius, im_inv })
    }

    /// Radius bound for the curve's Riemann matrix.
    pub fn for_periods(periods: &Periods) -> Result<Self> {
        Self::new(&periods.data().riemann, THETA_TAIL_TOL)
    }

    /// Genus.
    pub fn genus(&self) -> usize {
        self.riemann.len()
    }

    /// Splits `z = r + m1 + 𝔹 m2` with integer `m1, m2` and `r` in the
    /// fundamental cell around 0.
    pub fn reduce(&self, z: &[Complex64]) -> (Vec<Complex64>, Vec<i64>, Vec<i64>) {
        let g = self.genus();
        let im: Vec<f64> = z.iter().map(|c| c.im).collect();
        let m2: Vec<i64> =
            (0..g).map(|i| (0..g).map(|j| self.im_inv[i][j] * im[j]).sum::<f64>().round() as i64).collect();
        let shifted: Vec<Complex64> =
            (0..g).map(|i| z[i] - (0..g).map(|j| self.riemann[i][j] * m2[j] as f64).sum::<Complex64>()).collect();
        let m1: Vec<i64> = shifted.iter().map(|c| c.re.round() as i64).collect();
        let r = shifted.iter().zip(&m1).map(|(c, &k)| c - k as f64).collect();
        (r, m1, m2)
    }
}

/// Lattice points `|n_i| ≤ R` in lexicographic order.
fn lattice(g: usize, r: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * r + 1) as usize;
    let total = side.pow(g as u32);
    (0..total).map(move |mut idx| {
        let mut n = vec![0i64; g];
        for k in (0..g).rev() {
            n[k] = (idx % side) as i64 - r;
            idx /= side;
        }
        n
    })
}

/// `θ(z)` and `Σ (2πi nᵀd) exp(…)` for each direction `d`.
fn theta_series(z: &[Complex64], p: &ThetaParams, dirs: &[&[Complex64]]) -> (Complex64, Vec<Complex64>) {
    let g = p.genus();
    let mut val = Complex64::new(0.0, 0.0);
    let mut ders = vec![Complex64::new(0.0, 0.0); dirs.len()];
    for n in lattice(g, p.radius) {
        let nf: Vec<f64> = n.iter().map(|&k| k as f64).collect();
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                quad += p.riemann[i][j] * nf[i] * nf[j];
            }
        }
        let lin: Complex64 = (0..g).map(|i| z[i] * nf[i]).sum();
        let term = (Complex64::new(0.0, PI) * quad + I2PI * lin).exp();
        val += term;
        for (d, acc) in dirs.iter().zip(ders.iter_mut()) {
            let nd: Complex64 = (0..g).map(|i| d[i] * nf[i]).sum();
            *acc += I2PI * nd * term;
        }
    }
    (val, ders)
}

/// Truncated `Σ_{|n_i|≤R} exp(πi nᵀ𝔹n + 2πi nᵀz)`.
pub fn riemann_theta(z: &[Complex64], params: &ThetaParams) -> Complex64 {
    theta_series(z, params, &[]).0
}

/// `log θ(z)` through the quasi-periodic reduction, with derivatives of
/// `log θ` along each direction.
fn log_theta(z: &[Complex64], p: &ThetaParams, dirs: &[&[Complex64]]) -> Result<(Complex64, Vec<Complex64>)> {
    let g = p.genus();
    let (r, _m1, m2) = p.reduce(z);
    let (val, ders) = theta_series(&r, p, dirs);
    if val.norm() < THETA_DIVISOR_FLOOR {
        return Err(Error::ThetaDivisorHit(val.norm()));
    }
    // θ(r + m1 + 𝔹m2) = exp(-πi m2ᵀ𝔹m2 - 2πi m2ᵀr)·θ(r).
    let mf: Vec<f64> = m2.iter().map(|&k| k as f64).collect();
    let mut quad = Complex64::new(0.0, 0.0);
    for i in 0..g {
        for j in 0..g {
            quad += p.riemann[i][j] * mf[i] * mf[j];
        }
    }
    let lin: Complex64 = (0..g).map(|i| r[i] * mf[i]).sum();
    let log_val = -Complex64::new(0.0, PI) * quad - I2PI * lin + val.ln();
    let dlogs = dirs
        .iter()
        .zip(&ders)
        .map(|(d, dv)| {
            let md: Complex64 = (0..g).map(|i| d[i] * mf[i]).sum();
            dv / val - I2PI * md
        })
        .collect();
    Ok((log_val, dlogs))
}

/// Wave vectors and phase of a theta solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TodaSolutionParams {
    #[serde(rename = "U")]
    pub u: Vec<Complex64>,
    /// Time vector of the flow driving `t`.
    #[serde(rename = "V")]
    pub v: Vec<Complex64>,
    /// Toda time vector; `v_n` is the derivative along it.
    #[serde(rename = "W")]
    pub w: Vec<Complex64>,
    pub z0: Vec<Complex64>,
    /// Multiplier applied to the b-periods of the unit differential to get `V`.
    pub v_scale: f64,
}

/// a-normalized second-kind differential with zero residues at `∞±` and
/// principal part `Σ_k c_k ζ^k dζ` at `∞⁺` in `ζ = u - center`.
///
/// `principal[k]` is `c_k`; the part at `∞⁻` is the negative.
pub fn second_kind_with_principal(periods: &Periods, principal: &[f64], center: f64) -> Result<DifferentialRep> {
    let curve = periods.curve();
    let g = curve.genus();
    let m = principal.len();
    if m == 0 {
        return Err(Error::InvalidInput("empty principal part".into()));
    }
    // Expansion of Σ c_k (u - center)^k in u.
    let target = crate::poly::compose_affine(principal, -center, 1.0);
    // 1/v = u^{-g-1} Σ e_k u^{-k} at ∞⁺.
    let e = inverse_sqrt_series(&curve.branch_points(), m + 1);
    // p = Σ_{j<g+1+m} p_j u^j; match u^{m-1} … u^{-1} of p/v.
    let top = g + m;
    let mut p = vec![0.0; top + 1];
    for d in (0..=m).rev() {
        // Coefficient of u^{d-1} in p/v involves p_{g+d}, p_{g+d+1}, …
        let want = if d >= 1 { target.get(d - 1).copied().unwrap_or(0.0) } else { 0.0 };
        let known: f64 = (1..=(m - d)).map(|k| p[g + d + k] * e[k]).sum();
        p[g + d] = (want - known) / e[0];
    }
    let pc: Vec<Complex64> = p.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let mut lower = vec![Complex64::new(0.0, 0.0); top + 1];
    lower[g..].copy_from_slice(&pc[g..]);
    let rhs: Vec<Complex64> = (1..=g).map(|k| -periods.a_period(&lower, k)).collect();
    let c = linalg::solve(&periods.data().a_periods, &rhs)?;
    lower[..g].copy_from_slice(&c);
    Ok(DifferentialRep { coeffs: lower, kind: DiffKind::SecondKind })
}

/// Coefficients of `∏(1 - a_i w)^{-1/2}` up to `w^{order-1}`.
fn inverse_sqrt_series(roots: &[f64], order: usize) -> Vec<f64> {
    let mut acc = vec![0.0; order];
    acc[0] = 1.0;
    for &a in roots {
        // (1 - a w)^{-1/2} = Σ binom(2k,k)/4^k a^k w^k.
        let mut f = vec![0.0; order];
        f[0] = 1.0;
        for k in 1..order {
            f[k] = f[k - 1] * a * (2 * k - 1) as f64 / (2 * k) as f64;
        }
        let mut next = vec![0.0; order];
        for i in 0..order {
            for j in 0..order - i {
                next[i + j] += acc[i] * f[j];
            }
        }
        acc = next;
    }
    acc
}

/// b-periods of a differential.
fn b_vector(periods: &Periods, d: &DifferentialRep) -> Vec<Complex64> {
    (1..=periods.curve().genus()).map(|k| periods.b_period(&d.coeffs, k)).collect()
}

/// Default phase `𝔹·(¼,…,¼) + (¼,…,¼)`.
pub fn default_z0(riemann: &CMat) -> Vec<Complex64> {
    riemann.iter().map(|r| r.iter().map(|b| 0.25 * b).sum::<Complex64>() + 0.25).collect()
}

/// Which lattice equation a time vector drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeFlow {
    /// `v̇ = c_{n+1} - c_n`, `ċ = c_n(v_n - v_{n-1})`.
    Toda,
    /// `ċ = c_n(c_{n+1} - c_{n-1})`.
    Kdv,
}

impl LatticeFlow {
    /// Phase used when none is supplied: generic for Toda, symmetric for KdV.
    pub fn default_phase(self, riemann: &CMat) -> Vec<Complex64> {
        match self {
            LatticeFlow::Toda => default_z0(riemann),
            LatticeFlow::Kdv => vec![Complex64::new(0.0, 0.0); riemann.len()],
        }
    }
}

/// Below this norm a unit time vector is treated as zero (stationary flow).
pub const STATIONARY_FLOOR: f64 = 1e-10;

/// Unit time vector of a flow: b-periods of the differential with principal
/// part `d(ζ/2)` (Toda) or `d(ζ²/2)` (KdV, `ζ` centred on the support).
pub fn unit_time_vector(periods: &Periods, flow: LatticeFlow) -> Result<Vec<Complex64>> {
    let d = match flow {
        LatticeFlow::Toda => second_kind_with_principal(periods, &[0.5], 0.0)?,
        LatticeFlow::Kdv => {
            let c = periods.curve();
            let center = 0.5 * c.u()[c.genus() - 1];
            second_kind_with_principal(periods, &[0.0, 1.0], center)?
        }
    };
    Ok(b_vector(periods, &d))
}

/// Probe grid of the calibration fit.
const PROBE_N: (i64, i64) = (-2, 2);
const PROBE_T: [f64; 3] = [0.0, 0.3, 0.7];
const PROBE_STEP: f64 = 1e-4;

/// Least-squares multiplier `κ` in `lhs ≈ κ·rhs` over the probe grid, where
/// `(lhs, rhs)` is `(v̇_n, c_{n+1} - c_n)` for Toda and
/// `(ċ_n, c_n(c_{n+1} - c_{n-1}))` for KdV.
fn fit_multiplier(params: &TodaSolutionParams, theta: &ThetaParams, flow: LatticeFlow) -> Result<f64> {
    let h = PROBE_STEP;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for &t in &PROBE_T {
        for n in PROBE_N.0..=PROBE_N.1 {
            let (_, c) = toda_solution(params, theta, n, t)?;
            let (_, cp1) = toda_solution(params, theta, n + 1, t)?;
            // Five-point stencil: the fit must not inherit O(h²) bias.
            let mut d = [Complex64::new(0.0, 0.0); 2];
            for (j, w) in [(1.0, 8.0), (2.0, -1.0)] {
                let (vp, cp) = toda_solution(params, theta, n, t + j * h)?;
                let (vm, cm) = toda_solution(params, theta, n, t - j * h)?;
                d[0] += w * (vp - vm) / (12.0 * h);
                d[1] += w * (cp - cm) / (12.0 * h);
            }
            let (lhs, rhs) = match flow {
                LatticeFlow::Toda => (d[0], cp1 - c),
                LatticeFlow::Kdv => {
                    let (_, cm1) = toda_solution(params, theta, n - 1, t)?;
                    (d[1], c * (cp1 - cm1))
                }
            };
            num += rhs.conj() * lhs;
            den += rhs.norm_sqr();
        }
    }
    if den < 1e-24 {
        return Err(Error::InvalidInput("calibration probe is degenerate".into()));
    }
    Ok((num / den).re)
}

/// `U = 2πi·∫_{∞⁻}^{∞⁺} ω` and calibrated time vectors.
///
/// The theta quotient for `c_n` carries a curve-dependent constant factor
/// `κ`. The unit Toda vector is rescaled by `1/√κ`, with `κ` fitted by least
/// squares at the default phase. The unit KdV vector is rescaled by `1/κ₂`,
/// fitted at the symmetric phase; a vanishing KdV vector is kept as is.
pub fn toda_wave_vectors(
    periods: &Periods,
    flow: LatticeFlow,
    z0: Option<Vec<Complex64>>,
) -> Result<TodaSolutionParams> {
    let theta = ThetaParams::for_periods(periods)?;
    let riemann = &periods.data().riemann;
    let u: Vec<Complex64> = abel_between_infinities(periods).iter().map(|a| I2PI * a).collect();
    let z0 = z0.unwrap_or_else(|| flow.default_phase(riemann));
    let unit = unit_time_vector(periods, LatticeFlow::Toda)?;
    let probe =
        TodaSolutionParams { u: u.clone(), v: unit.clone(), w: unit.clone(), z0: default_z0(riemann), v_scale: 1.0 };
    let kappa = fit_multiplier(&probe, &theta, LatticeFlow::Toda)?;
    if kappa <= 0.0 {
        return Err(Error::InvariantViolation(format!("Toda calibration multiplier {kappa:e} is not positive")));
    }
    let s = 1.0 / kappa.sqrt();
    let w: Vec<Complex64> = unit.iter().map(|z| z * s).collect();
    match flow {
        LatticeFlow::Toda => Ok(TodaSolutionParams { u, v: w.clone(), w, z0, v_scale: s }),
        LatticeFlow::Kdv => {
            require_symmetric(periods.curve())?;
            let unit2 = unit_time_vector(periods, LatticeFlow::Kdv)?;
            let norm = unit2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let s2 = if norm < STATIONARY_FLOOR {
                1.0
            } else {
                let probe = TodaSolutionParams {
                    u: u.clone(),
                    v: unit2.clone(),
                    w: w.clone(),
                    z0: LatticeFlow::Kdv.default_phase(riemann),
                    v_scale: 1.0,
                };
                let k2 = fit_multiplier(&probe, &theta, LatticeFlow::Kdv)?;
                if k2.abs() < STATIONARY_FLOOR {
                    return Err(Error::InvariantViolation("KdV calibration multiplier vanishes".into()));
                }
                1.0 / k2
            };
            Ok(TodaSolutionParams { u, v: unit2.iter().map(|z| z * s2).collect(), w, z0, v_scale: s2 })
        }
    }
}

/// Relative tolerance of the support-symmetry test.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// The KdV reduction needs branch points symmetric about the support centre.
fn require_symmetric(curve: &CurveSpec) -> Result<()> {
    let b = curve.branch_points();
    let span = b[b.len() - 1];
    let worst = (0..b.len()).map(|i| (b[i] + b[b.len() - 1 - i] - span).abs()).fold(0.0f64, f64::max);
    if worst > SYMMETRY_TOL * span {
        return Err(Error::InvalidInput(format!("KdV flow needs a symmetric support (asymmetry {worst:e})")));
    }
    Ok(())
}

fn point(params: &TodaSolutionParams, n: i64, t: f64) -> Vec<Complex64> {
    (0..params.u.len()).map(|i| (params.u[i] * n as f64 + params.v[i] * t) / I2PI + params.z0[i]).collect()
}

/// `(v_n, c_n)` at time `t`; `v_n` from the analytic derivative of the series
/// along the Toda vector.
pub fn toda_solution(
    params: &TodaSolutionParams,
    theta: &ThetaParams,
    n: i64,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    let dir: Vec<Complex64> = params.w.iter().map(|z| z / I2PI).collect();
    let (l0, d0) = log_theta(&point(params, n, t), theta, &[&dir])?;
    let (lp, dp) = log_theta(&point(params, n + 1, t), theta, &[&dir])?;
    let (lm, _) = log_theta(&point(params, n - 1, t), theta, &[])?;
    let c = (lp + lm - 2.0 * l0).exp();
    Ok((dp[0] - d0[0], c))
}

/// Maximal residuals of the lattice equations over `n_range` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeResidual {
    /// `|v̇_n - (c_{n+1} - c_n)|`.
    pub toda_v: f64,
    /// `|ċ_n - c_n(v_n - v_{n-1})|`.
    pub toda_c: f64,
    /// `|ċ_n - c_n(c_{n+1} - c_{n-1})|`.
    pub kdv: f64,
    /// `max |v_n|`.
    pub v_max: f64,
}

/// Toda and KdV residuals with five-point time differences of step `h`.
pub fn lattice_residual(
    params: &TodaSolutionParams,
    theta: &ThetaParams,
    n_range: (i64, i64),
    t: f64,
    h: f64,
) -> Result<LatticeResidual> {
    let (lo, hi) = n_range;
    let at = |n: i64, s: f64| toda_solution(params, theta, n, s);
    let mut out = LatticeResidual { toda_v: 0.0, toda_c: 0.0, kdv: 0.0, v_max: 0.0 };
    for n in lo..=hi {
        let (v, c) = at(n, t)?;
        let (vm1, _) = at(n - 1, t)?;
        let (_, cp1) = at(n + 1, t)?;
        let (_, cm1) = at(n - 1, t)?;
        let (vp, cp) = at(n, t + h)?;
        let (vm, cm) = at(n, t - h)?;
        let (vpp, cpp) = at(n, t + 2.0 * h)?;
        let (vmm, cmm) = at(n, t - 2.0 * h)?;
        let vdot = (8.0 * (vp - vm) - (vpp - vmm)) / (12.0 * h);
        let cdot = (8.0 * (cp - cm) - (cpp - cmm)) / (12.0 * h);
        out.toda_v = out.toda_v.max((vdot - (cp1 - c)).norm());
        out.toda_c = out.toda_c.max((cdot - c * (v - vm1)).norm());
        out.kdv = out.kdv.max((cdot - c * (cp1 - cm1)).norm());
        out.v_max = out.v_max.max(v.norm());
    }
    Ok(out)
}

/// `∫_{∞⁻}^{∞⁺} ω = M1 + 𝔹 M2` recovered with denominators `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisionPoint {
    /// `N·M1`.
    pub nm1: Vec<i64>,
    /// `N·M2`.
    pub nm2: Vec<i64>,
    /// `|N·∫ω - (N M1 + 𝔹 N M2)|`.
    pub residual: f64,
}

/// Rounds `N·U/(2πi)` against the lattice `ℤ^g + 𝔹ℤ^g`.
pub fn division_point(params: &TodaSolutionParams, theta: &ThetaParams, n: usize) -> DivisionPoint {
    let g = theta.genus();
    let nu: Vec<Complex64> = params.u.iter().map(|z| z * n as f64 / I2PI).collect();
    let (r, m1, m2) = theta.reduce(&nu);
    let residual = r.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let _ = g;
    DivisionPoint { nm1: m1, nm2: m2, residual }
}

/// Periodicity maxima and the division-point residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicityReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub c_max: f64,
    pub v_max: f64,
    pub division: DivisionPoint,
}

/// `max |c_{n+N} - c_n|`, `max |v_{n+N} - v_n|` over the grid, and the lattice
/// condition on `N·U`.
pub fn periodicity_check(
    params: &TodaSolutionParams,
    theta: &ThetaParams,
    n: usize,
    n_range: (i64, i64),
    t_samples: &[f64],
) -> Result<PeriodicityReport> {
    let mut c_max = 0.0f64;
    let mut v_max = 0.0f64;
    for &t in t_samples {
        for k in n_range.0..=n_range.1 {
            let (v0, c0) = toda_solution(params, theta, k, t)?;
            let (v1, c1) = toda_solution(params, theta, k + n as i64, t)?;
            c_max = c_max.max((c1 - c0).norm());
            v_max = v_max.max((v1 - v0).norm());
        }
    }
    Ok(PeriodicityReport { n, c_max, v_max, division: division_point(params, theta, n) })
}

/// Periodicity and residual checks against tolerances.
pub fn lattice_report(
    params: &TodaSolutionParams,
    theta: &ThetaParams,
    flow: LatticeFlow,
    n_period: Option<usize>,
    n_range: (i64, i64),
    t_samples: &[f64],
    tol: f64,
) -> Result<Report> {
    let mut rep = Report::default();
    let mut worst = LatticeResidual { toda_v: 0.0, toda_c: 0.0, kdv: 0.0, v_max: 0.0 };
    for &t in t_samples {
        let r = lattice_residual(params, theta, n_range, t, DEFAULT_TIME_STEP)?;
        worst.toda_v = worst.toda_v.max(r.toda_v);
        worst.toda_c = worst.toda_c.max(r.toda_c);
        worst.kdv = worst.kdv.max(r.kdv);
        worst.v_max = worst.v_max.max(r.v_max);
    }
    match flow {
        LatticeFlow::Toda => {
            rep.push("toda_velocity_equation", worst.toda_v, tol);
            rep.push("toda_ratio_equation", worst.toda_c, tol);
        }
        LatticeFlow::Kdv => {
            rep.push("kdv_equation", worst.kdv, tol);
            rep.push("kdv_velocity_vanishes", worst.v_max, VELOCITY_TOL);
        }
    }
    if let Some(n) = n_period {
        let p = periodicity_check(params, theta, n, n_range, t_samples)?;
        rep.push("period_c", p.c_max, PERIOD_TOL);
        rep.push("period_v", p.v_max, PERIOD_TOL);
        rep.push("division_point", p.division.residual, DIVISION_TOL);
    }
    Ok(rep)
}

/// Synthesis parameters as a JSON sidecar.
pub fn params_json(params: &TodaSolutionParams, theta: &ThetaParams, flow: LatticeFlow) -> Value {
    let cv = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
    json!({
        "flow": flow,
        "U": cv(&params.u),
        "V": cv(&params.v),
        "W": cv(&params.w),
        "z0": cv(&params.z0),
        "v_scale": params.v_scale,
        "radius": theta.radius,
    })
}

/// Curve-level convenience: periods, theta parameters and calibrated vectors.
pub fn synthesize(
    curve: &CurveSpec,
    flow: LatticeFlow,
    z0: Option<Vec<Complex64>>,
    quad_tol: f64,
) -> Result<(TodaSolutionParams, ThetaParams)> {
    let periods = Periods::compute(curve, quad_tol)?;
    let theta = ThetaParams::for_periods(&periods)?;
    let params = toda_wave_vectors(&periods, flow, z0)?;
    Ok((params, theta))
}
