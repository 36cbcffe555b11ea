//! Periods of differentials `p(u)·du/v` by branch-cut quadrature.
//!
//! Cycle convention: `a_k` encircles the gap `[u_{k-1}, x_k]` (`u₀ = 1`),
//! `b_k` encircles the first `k` bands clockwise, `a_k∘b_j = δ_{kj}`. Both
//! collapse onto real segments, so every period is twice a segment integral
//! of `p/v₊`:
//!
//! * `∮_{a_k} = -2·∫_{gap k} p/v₊`
//! * `∮_{b_k} = 2·Σ_{l<k} ∫_{band l} p/v₊`
//!
//! Segment integrals use `u = m + h·cosθ` and Gauss–Chebyshev nodes; the
//! integrand `p/r` with `r = v/√((u-lo)(hi-u))` is smooth on the segment.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{i_pow, BranchId, CurveSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::quad;
use crate::{json as cj, poly};

/// Default absolute/relative quadrature tolerance.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A converged quadrature rule `∫ p(u)/v₊(u) du ≈ Σ w_k p(u_k)` on one segment.
#[derive(Debug, Clone)]
pub struct SegmentRule {
    /// Left end of the segment.
    pub lo: f64,
    /// Right end of the segment (`+∞` for the tail rule).
    pub hi: f64,
    /// Node count at which the ladder converged.
    pub nodes_used: usize,
    nodes: Vec<f64>,
    weights: Vec<Complex64>,
}

impl SegmentRule {
    /// Integral of a complex-coefficient polynomial against `du/v₊`.
    pub fn integrate(&self, p: &[Complex64]) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * poly::eval_c(p, u)).sum()
    }

    /// Integral of a real polynomial against `du/v₊`.
    pub fn integrate_real(&self, p: &[f64]) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * poly::eval(p, u)).sum()
    }
}

fn moments(nodes: &[f64], weights: &[Complex64], max_deg: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; max_deg + 1];
    for (&u, &w) in nodes.iter().zip(weights) {
        let mut pw = w;
        for m in out.iter_mut() {
            *m += pw;
            pw *= u;
        }
    }
    out
}

fn relative_change(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm() / y.norm().max(1.0)).fold(0.0, f64::max)
}

/// Runs the doubling ladder on a node/weight generator until the moments of
/// degree `0..=max_deg` agree within `tol` between successive sizes.
fn converge<F>(lo: f64, hi: f64, tol: f64, max_deg: usize, build: F) -> Result<SegmentRule>
where
    F: Fn(usize) -> (Vec<f64>, Vec<Complex64>),
{
    let mut prev: Option<Vec<Complex64>> = None;
    let mut change = f64::INFINITY;
    for n in quad::ladder() {
        let (nodes, weights) = build(n);
        let mom = moments(&nodes, &weights, max_deg);
        if let Some(p) = &prev {
            change = relative_change(p, &mom);
            if change <= tol {
                return Ok(SegmentRule { lo, hi, nodes_used: n, nodes, weights });
            }
        }
        prev = Some(mom);
    }
    Err(Error::QuadratureNotConverged { lo, hi, change })
}

/// Gauss–Chebyshev rule on the segment between branch points `idx` and `idx+1`.
fn segment_rule(curve: &CurveSpec, idx: usize, tol: f64, max_deg: usize) -> Result<SegmentRule> {
    let pts = curve.branch_points();
    let (lo, hi) = (pts[idx], pts[idx + 1]);
    let phase = i_pow(pts.len() - idx - 1);
    let others: Vec<f64> = pts.iter().enumerate().filter(|&(i, _)| i != idx && i != idx + 1).map(|(_, &a)| a).collect();
    let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    converge(lo, hi, tol, max_deg, |n| {
        let w0 = PI / n as f64;
        let nodes: Vec<f64> = quad::chebyshev_angles(n).iter().map(|t| m + h * t.cos()).collect();
        let weights = nodes
            .iter()
            .map(|&u| {
                let r: f64 = others.iter().map(|a| (u - a).abs()).product();
                w0 / (phase * r.sqrt())
            })
            .collect();
        (nodes, weights)
    })
}

/// Rule for `∫_{u_g}^{∞} p/v₊ du` with `deg p ≤ g-1`.
///
/// Substitution `u = u_g + L·s²`, `s = τ/(1-τ)`, Gauss–Legendre in `τ`;
/// the transformed integrand is smooth at both ends of `[0, 1]`.
fn tail_rule(curve: &CurveSpec, tol: f64) -> Result<SegmentRule> {
    let pts = curve.branch_points();
    let g = curve.genus();
    let ug = pts[pts.len() - 1];
    let others = &pts[..pts.len() - 1];
    let scale = ug - pts[pts.len() - 2];
    let sq = scale.sqrt();
    converge(ug, f64::INFINITY, tol, g.saturating_sub(1), |n| {
        let (ts, ws) = quad::gauss_legendre_unit(n);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (&t, &w) in ts.iter().zip(ws) {
            let s = t / (1.0 - t);
            let u = ug + scale * s * s;
            let r: f64 = others.iter().map(|a| u - a).product();
            nodes.push(u);
            weights.push(Complex64::new(2.0 * sq * w / (r.sqrt() * (1.0 - t).powi(2)), 0.0));
        }
        (nodes, weights)
    })
}

/// `∫_{lo}^{hi} p(u)du/v₊(u)` over a band or gap between consecutive branch points.
pub fn cut_integral(curve: &CurveSpec, p: &[Complex64], interval: (f64, f64), tol: f64) -> Result<Complex64> {
    let pts = curve.branch_points();
    let idx = pts.windows(2).position(|w| w[0] == interval.0 && w[1] == interval.1).ok_or_else(|| {
        Error::InvalidInput(format!(
            "[{}, {}] is not a segment between consecutive branch points",
            interval.0, interval.1
        ))
    })?;
    let others: Vec<f64> = pts.iter().enumerate().filter(|&(i, _)| i != idx && i != idx + 1).map(|(_, &a)| a).collect();
    let phase = i_pow(pts.len() - idx - 1);
    let (lo, hi) = interval;
    let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let mut prev: Option<Complex64> = None;
    let mut change = f64::INFINITY;
    for n in quad::ladder() {
        let w0 = PI / n as f64;
        let val: Complex64 = quad::chebyshev_angles(n)
            .iter()
            .map(|t| {
                let u = m + h * t.cos();
                let r: f64 = others.iter().map(|a| (u - a).abs()).product();
                poly::eval_c(p, u) * w0 / (phase * r.sqrt())
            })
            .sum();
        if let Some(pv) = prev {
            change = (val - pv).norm() / val.norm().max(1.0);
            if change <= tol {
                return Ok(val);
            }
        }
        prev = Some(val);
    }
    Err(Error::QuadratureNotConverged { lo, hi, change })
}

/// `∫_a^b p(u)/√|Δ(u)| du` from a branch point `a` to a regular point `b` in an
/// adjacent interval (either side). Substitution `u = a + (b-a)τ²`.
pub fn endpoint_integral(curve: &CurveSpec, p: &[f64], a: f64, b: f64, tol: f64) -> Result<f64> {
    let pts = curve.branch_points();
    let others: Vec<f64> = pts.iter().copied().filter(|&x| x != a).collect();
    if others.len() + 1 != pts.len() {
        return Err(Error::InvalidInput(format!("{a} is not a branch point")));
    }
    let d = b - a;
    let pref = 2.0 * d.signum() * d.abs().sqrt();
    let mut prev: Option<f64> = None;
    let mut change = f64::INFINITY;
    for n in quad::ladder() {
        let (ts, ws) = quad::gauss_legendre_unit(n);
        let val: f64 = ts
            .iter()
            .zip(ws)
            .map(|(&t, &w)| {
                let u = a + d * t * t;
                let r: f64 = others.iter().map(|x| (u - x).abs()).product();
                w * pref * poly::eval(p, u) / r.sqrt()
            })
            .sum();
        if let Some(pv) = prev {
            change = (val - pv).abs() / val.abs().max(1.0);
            if change <= tol {
                return Ok(val);
            }
        }
        prev = Some(val);
    }
    Err(Error::QuadratureNotConverged { lo: a.min(b), hi: a.max(b), change })
}

/// Which family of cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CycleKind {
    A,
    B,
}

/// One element of the canonical homology basis (index 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleIndex {
    pub kind: CycleKind,
    pub index: usize,
}

impl CycleIndex {
    /// `a_k`.
    pub fn a(index: usize) -> Self {
        CycleIndex { kind: CycleKind::A, index }
    }

    /// `b_k`.
    pub fn b(index: usize) -> Self {
        CycleIndex { kind: CycleKind::B, index }
    }
}

/// Kind of a differential `p(u)du/v`, fixing the admissible degree of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiffKind {
    /// `deg p ≤ g-1`.
    Holomorphic,
    /// `deg p = g`, leading coefficient `-1`: residue `+1` at `∞⁺`.
    ThirdKind,
    /// `deg p = g+1`: double poles at `∞±`.
    SecondKind,
}

/// A differential `p(u)du/v` by its complex coefficient vector (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialRep {
    pub coeffs: Vec<Complex64>,
    pub kind: DiffKind,
}

impl DifferentialRep {
    /// Multiplies the differential by a scalar.
    pub fn scaled(&self, s: Complex64) -> Self {
        DifferentialRep { coeffs: self.coeffs.iter().map(|c| c * s).collect(), kind: self.kind }
    }

    /// JSON form `{"kind", "coeffs": [[re,im],…]}`.
    pub fn to_json(&self) -> Value {
        json!({ "kind": format!("{:?}", self.kind), "coeffs": cj::cvec(&self.coeffs) })
    }
}

/// Period data of the holomorphic monomial basis and its normalisation.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodData {
    /// `a_periods[k][m] = ∮_{a_{k+1}} u^m du/v`.
    pub a_periods: CMat,
    /// `b_periods[k][m] = ∮_{b_{k+1}} u^m du/v`.
    pub b_periods: CMat,
    /// `ω_l = Σ_m omega_coeffs[l][m]·u^m du/v`, normalised by `∮_{a_k} ω_l = δ_{kl}`.
    pub omega_coeffs: CMat,
    /// Riemann matrix `𝔹_{kl} = ∮_{b_k} ω_l`.
    pub riemann: CMat,
    /// `∫_{∞⁻}^{∞⁺} ω` along the real axis right of `u_g`.
    pub abel_infty: Vec<Complex64>,
}

impl PeriodData {
    /// JSON artifact: complex numbers as `[re, im]`, matrices row-major.
    pub fn to_json(&self) -> Value {
        json!({
            "a_periods": cj::cmat(&self.a_periods),
            "b_periods": cj::cmat(&self.b_periods),
            "omega_coeffs": cj::cmat(&self.omega_coeffs),
            "riemann": cj::cmat(&self.riemann),
            "abel_infty": cj::cvec(&self.abel_infty),
        })
    }
}

/// A curve with converged segment rules and its period data.
#[derive(Debug, Clone)]
pub struct Periods {
    curve: CurveSpec,
    tol: f64,
    gap_rules: Vec<SegmentRule>,
    band_rules: Vec<SegmentRule>,
    tail: SegmentRule,
    data: PeriodData,
}

/// Computes the normalised holomorphic basis, Riemann matrix and infinity
/// Abel integral at the default tolerance.
pub fn normalized_holomorphic_basis(curve: &CurveSpec) -> Result<Periods> {
    Periods::compute(curve, DEFAULT_QUAD_TOL)
}

impl Periods {
    /// Builds segment rules at tolerance `tol` and assembles [`PeriodData`].
    pub fn compute(curve: &CurveSpec, tol: f64) -> Result<Self> {
        let g = curve.genus();
        let max_deg = 2 * g + 1;
        let mut band_rules = Vec::with_capacity(g + 1);
        let mut gap_rules = Vec::with_capacity(g);
        for idx in 0..(2 * g + 1) {
            let rule = segment_rule(curve, idx, tol, max_deg)?;
            if idx % 2 == 0 {
                band_rules.push(rule);
            } else {
                gap_rules.push(rule);
            }
        }
        let tail = tail_rule(curve, tol)?;
        let mut out = Periods {
            curve: curve.clone(),
            tol,
            gap_rules,
            band_rules,
            tail,
            data: PeriodData {
                a_periods: vec![],
                b_periods: vec![],
                omega_coeffs: vec![],
                riemann: vec![],
                abel_infty: vec![],
            },
        };
        let mono = |m: usize| {
            let mut p = vec![ZERO; m + 1];
            p[m] = ONE;
            p
        };
        let a_periods: CMat = (1..=g).map(|k| (0..g).map(|m| out.a_period(&mono(m), k)).collect()).collect();
        let b_periods: CMat = (1..=g).map(|k| (0..g).map(|m| out.b_period(&mono(m), k)).collect()).collect();
        // Σ_m C[l][m]·A[k][m] = δ_{kl}  ⇒  C = (Aᵀ)⁻¹.
        let omega_coeffs = linalg::inverse(&linalg::transpose(&a_periods))?;
        let riemann: CMat = (0..g)
            .map(|k| (0..g).map(|l| (0..g).map(|m| omega_coeffs[l][m] * b_periods[k][m]).sum()).collect())
            .collect();
        out.data = PeriodData { a_periods, b_periods, omega_coeffs, riemann, abel_infty: vec![] };
        out.data.abel_infty = (0..g).map(|l| 2.0 * out.tail.integrate(&out.data.omega_coeffs[l])).collect();
        out.check_invariants()?;
        Ok(out)
    }

    fn check_invariants(&self) -> Result<()> {
        let b = &self.data.riemann;
        let g = b.len();
        let scale = b.iter().flatten().fold(1.0f64, |m, z| m.max(z.norm()));
        for i in 0..g {
            for j in 0..i {
                let asym = (b[i][j] - b[j][i]).norm();
                if asym > 1e-8 * scale {
                    return Err(Error::InvariantViolation(format!("Riemann matrix asymmetry {asym:e}")));
                }
            }
        }
        let im: Vec<Vec<f64>> = b.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
        let lam = linalg::min_symmetric_eigenvalue(&im);
        if lam <= 0.0 {
            return Err(Error::InvariantViolation(format!("Im B not positive definite (min eigenvalue {lam:e})")));
        }
        Ok(())
    }

    /// The curve these periods belong to.
    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    /// Quadrature tolerance used to build the rules.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The assembled period data.
    pub fn data(&self) -> &PeriodData {
        &self.data
    }

    /// Largest node count used by any segment rule.
    pub fn max_nodes(&self) -> usize {
        self.gap_rules
            .iter()
            .chain(&self.band_rules)
            .chain(std::iter::once(&self.tail))
            .map(|r| r.nodes_used)
            .max()
            .unwrap_or(0)
    }

    /// `∫_{band l} p/v₊` for `l = 0..=g` (band 0 is `[0,1]`).
    pub fn band_integral(&self, p: &[Complex64], l: usize) -> Complex64 {
        self.band_rules[l].integrate(p)
    }

    /// `∫_{gap k} p/v₊` for `k = 1..=g`.
    pub fn gap_integral(&self, p: &[Complex64], k: usize) -> Complex64 {
        self.gap_rules[k - 1].integrate(p)
    }

    /// `∮_{a_k} p du/v`, `k` 1-based.
    pub fn a_period(&self, p: &[Complex64], k: usize) -> Complex64 {
        -2.0 * self.gap_rules[k - 1].integrate(p)
    }

    /// `∮_{b_k} p du/v`, `k` 1-based.
    pub fn b_period(&self, p: &[Complex64], k: usize) -> Complex64 {
        2.0 * self.band_rules[..k].iter().map(|r| r.integrate(p)).sum::<Complex64>()
    }

    /// Coefficients of `ω_l` (1-based).
    pub fn omega_poly(&self, l: usize) -> &[Complex64] {
        &self.data.omega_coeffs[l - 1]
    }

    /// `ω_l(P_a)`.
    pub fn omega_at(&self, l: usize, a: BranchId) -> Complex64 {
        eval_at_ramification(&self.curve, self.omega_poly(l), a)
    }

    /// Polynomial `M` with `∮ du/((u-a)v) = ∮ M du/v` over every closed cycle.
    ///
    /// `du/((u-a)v) + (2/Δ'(a))·d(v/(u-a)) = M du/v` with `M` a polynomial of
    /// degree `2g`; the exact term has no periods and cancels the double pole
    /// at `P_a`.
    fn regularized_pole_poly(&self, a: BranchId) -> Vec<Complex64> {
        let av = self.curve.value(a);
        let d = poly::deflate(&self.curve.delta_poly(), av);
        let da = self.curve.branch_product(a);
        let num = poly::add(&poly::sub(&[da], &d), &poly::mul(&[-av, 1.0], &poly::derivative(&d)));
        poly::deflate(&num, av).iter().map(|&c| Complex64::new(c / da, 0.0)).collect()
    }

    /// Normalisation constants `β^{(a)}` making the a-periods of
    /// `W(·, P_a) = φ/((u-a)φ(P_a)) - Σ β_l ω_l` vanish.
    pub fn w_beta(&self, a: BranchId) -> Vec<Complex64> {
        let m = self.regularized_pole_poly(a);
        let phi_a = self.curve.phi_at_ramification(a);
        (1..=self.curve.genus()).map(|l| self.a_period(&m, l) / phi_a).collect()
    }

    /// `W(P_b, P_a)` for distinct ramification points.
    pub fn w_pair(&self, b: BranchId, a: BranchId) -> Result<Complex64> {
        if a == b {
            return Err(Error::CoincidentPoints);
        }
        let beta = self.w_beta(a);
        let (av, bv) = (self.curve.value(a), self.curve.value(b));
        let first = self.curve.phi_at_ramification(b) / (self.curve.phi_at_ramification(a) * (bv - av));
        let corr: Complex64 = beta.iter().enumerate().map(|(l, bl)| bl * self.omega_at(l + 1, b)).sum();
        Ok(first - corr)
    }

    /// Constant term `w₀` of `W(P, P_a) = (ζ⁻² + w₀ + O(ζ²)) dζ` as `P → P_a`.
    pub fn w_diagonal_constant(&self, a: BranchId) -> Complex64 {
        let beta = self.w_beta(a);
        let corr: Complex64 = beta.iter().enumerate().map(|(l, bl)| bl * self.omega_at(l + 1, a)).sum();
        -local_log_slope(&self.curve, a) - corr
    }

    /// `∮_{b_l} W(·, P_a)`.
    pub fn w_b_period(&self, a: BranchId, l: usize) -> Complex64 {
        let m = self.regularized_pole_poly(a);
        let phi_a = self.curve.phi_at_ramification(a);
        let beta = self.w_beta(a);
        let corr: Complex64 = beta.iter().enumerate().map(|(k, bk)| bk * self.data.riemann[l - 1][k]).sum();
        self.b_period(&m, l) / phi_a - corr
    }
}

/// `R'(0)/R(0) = Δ''(a)/(4Δ'(a))` for `v = ζ·R(ζ²)` at `P_a`.
fn local_log_slope(curve: &CurveSpec, a: BranchId) -> Complex64 {
    let d2 = poly::derivative(&poly::derivative(&curve.delta_poly()));
    let av = curve.value(a);
    Complex64::new(poly::eval(&d2, av) / (4.0 * curve.branch_product(a)), 0.0)
}

/// Ω_α: `deg p = g`, leading coefficient `-1`, `∮_{a_k} Ω_α = -α_k`.
pub fn third_kind_differential(periods: &Periods, alpha: &[Complex64]) -> Result<DifferentialRep> {
    let g = periods.curve.genus();
    if alpha.len() != g {
        return Err(Error::DimensionMismatch { expected: g, got: alpha.len() });
    }
    let mut lead = vec![ZERO; g + 1];
    lead[g] = -ONE;
    // Σ_m c_m A[k][m] = -α_k - ∮_{a_k}(-u^g).
    let rhs: Vec<Complex64> = (1..=g).map(|k| -alpha[k - 1] - periods.a_period(&lead, k)).collect();
    let c = linalg::solve(&periods.data.a_periods, &rhs)?;
    let mut coeffs = c;
    coeffs.push(-ONE);
    Ok(DifferentialRep { coeffs, kind: DiffKind::ThirdKind })
}

/// a-normalised second-kind differential `(½u^{g+1} + …)du/v` with zero
/// residues at `∞±`.
pub fn second_kind_differential(periods: &Periods) -> Result<DifferentialRep> {
    let curve = &periods.curve;
    let g = curve.genus();
    let s1: f64 = curve.branch_points().iter().sum();
    let mut top = vec![ZERO; g + 2];
    top[g + 1] = Complex64::new(0.5, 0.0);
    // 1/v = u^{-g-1}(1 + s₁/(2u) + …): the 1/u coefficient of p/v vanishes
    // when c_g = -s₁/4.
    top[g] = Complex64::new(-0.25 * s1, 0.0);
    let rhs: Vec<Complex64> = (1..=g).map(|k| -periods.a_period(&top, k)).collect();
    let c = linalg::solve(&periods.data.a_periods, &rhs)?;
    let mut coeffs = c;
    coeffs.push(top[g]);
    coeffs.push(top[g + 1]);
    Ok(DifferentialRep { coeffs, kind: DiffKind::SecondKind })
}

/// Period of a differential over one cycle.
pub fn differential_periods(periods: &Periods, diff: &DifferentialRep, cycle: CycleIndex) -> Result<Complex64> {
    let g = periods.curve.genus();
    if cycle.index == 0 || cycle.index > g {
        return Err(Error::InvalidInput(format!("cycle index {} out of range", cycle.index)));
    }
    Ok(match cycle.kind {
        CycleKind::A => periods.a_period(&diff.coeffs, cycle.index),
        CycleKind::B => periods.b_period(&diff.coeffs, cycle.index),
    })
}

/// All b-periods of a differential.
pub fn b_periods_of(periods: &Periods, diff: &DifferentialRep) -> Vec<Complex64> {
    (1..=periods.curve.genus()).map(|k| periods.b_period(&diff.coeffs, k)).collect()
}

/// `∫_{∞⁻}^{∞⁺} ω = 2∫_{u_g}^{∞} ω` along the real axis on the `+` sheet.
pub fn abel_between_infinities(periods: &Periods) -> Vec<Complex64> {
    periods.data.abel_infty.clone()
}

/// Constant term at `P_a` of `p du/v` in `ζ = √(u-a)`: `2p(a)/√(Δ'(a))`.
pub fn eval_at_ramification(curve: &CurveSpec, p: &[Complex64], a: BranchId) -> Complex64 {
    2.0 * poly::eval_c(p, curve.value(a)) / curve.local_sqrt(a)
}

/// Coefficient of `ζ²` in the expansion of `p du/v = (Υ₀ + Υ₂ζ² + …)dζ` at `P_a`.
pub fn taylor2_at_ramification(curve: &CurveSpec, p: &[Complex64], a: BranchId) -> Complex64 {
    let av = curve.value(a);
    let pa = poly::eval_c(p, av);
    let dpa = poly::eval_c(&poly::derivative_c(p), av);
    2.0 * (dpa - pa * local_log_slope(curve, a)) / curve.local_sqrt(a)
}

/// `W(P_a, P_b)` evaluated at two distinct ramification points.
pub fn w_at_ramification_pair(periods: &Periods, a: BranchId, b: BranchId) -> Result<Complex64> {
    periods.w_pair(a, b)
}
