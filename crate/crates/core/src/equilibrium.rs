//! Equilibrium measures of interval systems `[0,1] ∪ [x₁,u₁] ∪ … ∪ [x_g,u_g]`,
//! their relation to the b-periods of `Ω₀`, isoequilibrium flows and the
//! rational-measure criterion.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{build_curve, CurveSpec};
use crate::error::{Error, Result};
use crate::isoflow::{integrate_flow, FlowOptions, FlowState, FlowTrajectory};
use crate::periods::{cut_integral, DEFAULT_QUAD_TOL};
use crate::poly;

/// Tolerance on `Σρ = 1`.
pub const MASS_TOL: f64 = 1e-9;
/// Agreement required between the direct and complementary `ρ₀`.
pub const RHO0_CROSS_TOL: f64 = 1e-8;
/// Default tolerance of [`rational_measure_detect`].
pub const RATIONAL_TOL: f64 = 1e-8;
/// Default largest denominator of [`rational_measure_detect`].
pub const RATIONAL_N_MAX: usize = 64;

/// Union of `g+1` disjoint increasing bands, the first being `[0,1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSystem {
    pub bands: Vec<(f64, f64)>,
}

impl IntervalSystem {
    /// Bands of a curve.
    pub fn from_curve(curve: &CurveSpec) -> Self {
        IntervalSystem { bands: curve.bands() }
    }

    /// The curve with these bands; the first band must be `[0,1]`.
    pub fn to_curve(&self) -> Result<CurveSpec> {
        let first = self.bands.first().ok_or_else(|| Error::InvalidInput("no bands".into()))?;
        if *first != (0.0, 1.0) {
            return Err(Error::InvalidInput(format!("first band must be [0, 1], got [{}, {}]", first.0, first.1)));
        }
        let rest = &self.bands[1..];
        let x: Vec<f64> = rest.iter().map(|b| b.0).collect();
        let u: Vec<f64> = rest.iter().map(|b| b.1).collect();
        build_curve(rest.len(), &x, &u)
    }
}

/// Equilibrium measure of each band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureVector {
    pub rho: Vec<f64>,
}

impl MeasureVector {
    /// Validates positivity and unit mass.
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::InvalidInput("empty measure vector".into()));
        }
        if let Some(r) = rho.iter().find(|r| !(**r > 0.0 && **r < 1.0) && rho.len() > 1) {
            return Err(Error::InvalidInput(format!("band measure {r} outside (0, 1)")));
        }
        let total: f64 = rho.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidInput(format!("measures sum to {total}")));
        }
        Ok(MeasureVector { rho })
    }

    /// Genus of the interval system.
    pub fn genus(&self) -> usize {
        self.rho.len() - 1
    }
}

/// Real value of a cut integral, whose phase is a power of `i`.
fn real_cut(curve: &CurveSpec, p: &[f64], seg: (f64, f64)) -> Result<f64> {
    let pc: Vec<Complex64> = p.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let z = cut_integral(curve, &pc, seg, DEFAULT_QUAD_TOL)?;
    Ok(z.re + z.im)
}

/// Monic `q_g` with `∫_{u_{j-1}}^{x_j} q_g du/√|Δ| = 0` on every gap, ascending.
///
/// Verifies one simple zero of `q_g` per gap.
pub fn gap_vanishing_polynomial(curve: &CurveSpec) -> Result<Vec<f64>> {
    let g = curve.genus();
    let gaps = curve.gaps();
    let mut a = vec![vec![0.0; g]; g];
    let mut rhs = vec![0.0; g];
    for (j, &gap) in gaps.iter().enumerate() {
        for (i, entry) in a[j].iter_mut().enumerate() {
            let mut mono = vec![0.0; i + 1];
            mono[i] = 1.0;
            *entry = real_cut(curve, &mono, gap)?;
        }
        let mut top = vec![0.0; g + 1];
        top[g] = 1.0;
        rhs[j] = -real_cut(curve, &top, gap)?;
    }
    let mut q = crate::linalg::solve_real(&a, &rhs)?;
    q.push(1.0);
    for &(lo, hi) in &gaps {
        let n = poly::sturm_count(&q, lo, hi);
        if n != 1 {
            return Err(Error::InvariantViolation(format!("q has {n} zeros in gap [{lo}, {hi}]")));
        }
    }
    Ok(q)
}

/// `ρ_j = (1/π)∫_{band j} |q_g| du/√|Δ|`, with `ρ₀` cross-checked against `1 - Σ_{j≥1} ρ_j`.
pub fn equilibrium_measures(curve: &CurveSpec) -> Result<MeasureVector> {
    let q = gap_vanishing_polynomial(curve)?;
    let bands = curve.bands();
    for &(lo, hi) in &bands {
        if poly::sturm_count(&q, lo, hi) != 0 {
            return Err(Error::InvariantViolation(format!("q vanishes inside band [{lo}, {hi}]")));
        }
    }
    let direct: Vec<f64> =
        bands.iter().map(|&b| real_cut(curve, &q, b).map(|v| v.abs() / PI)).collect::<Result<_>>()?;
    let rest: f64 = direct[1..].iter().sum();
    let rho0 = 1.0 - rest;
    if (rho0 - direct[0]).abs() > RHO0_CROSS_TOL {
        return Err(Error::InvariantViolation(format!(
            "band [0,1] measure {} disagrees with complement {rho0}",
            direct[0]
        )));
    }
    let mut rho = direct;
    rho[0] = rho0;
    MeasureVector::new(rho)
}

/// `(2πi ρ₀, 2πi(ρ₀+ρ₁), …, 2πi(ρ₀+…+ρ_{g-1}))`.
pub fn measures_to_bperiods(m: &MeasureVector) -> Vec<Complex64> {
    let mut acc = 0.0;
    m.rho[..m.genus()]
        .iter()
        .map(|r| {
            acc += r;
            Complex64::new(0.0, 2.0 * PI * acc)
        })
        .collect()
}

/// Inverse of [`measures_to_bperiods`]; the last band takes the remaining mass.
pub fn bperiods_to_measures(b: &[Complex64]) -> Result<MeasureVector> {
    let cum: Vec<f64> = b.iter().map(|z| (z / Complex64::new(0.0, 2.0 * PI)).re).collect();
    let mut rho = Vec::with_capacity(b.len() + 1);
    let mut prev = 0.0;
    for c in cum {
        rho.push(c - prev);
        prev = c;
    }
    rho.push(1.0 - prev);
    MeasureVector::new(rho)
}

/// A flow trajectory with the band measures at each sample.
#[derive(Debug, Clone)]
pub struct IsoequilibriumTrajectory {
    pub flow: FlowTrajectory,
    pub initial: MeasureVector,
    pub measures: Vec<MeasureVector>,
}

impl IsoequilibriumTrajectory {
    /// Largest deviation of any band measure from its initial value.
    pub fn measure_drift(&self) -> f64 {
        self.measures
            .iter()
            .flat_map(|m| m.rho.iter().zip(&self.initial.rho).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }
}

/// The `α = 0` isoperiodic flow, with band measures recomputed per sample.
pub fn isoequilibrium_flow(curve: &CurveSpec, path: &[Vec<f64>], step: f64) -> Result<IsoequilibriumTrajectory> {
    let g = curve.genus();
    let zero = vec![Complex64::new(0.0, 0.0); g];
    let state = FlowState::new(curve, &zero)?;
    let flow = integrate_flow(&state, path, &FlowOptions::with_step(step))?;
    let initial = equilibrium_measures(curve)?;
    let measures = flow
        .samples
        .iter()
        .map(|s| {
            if s.u.iter().any(|v| !v.is_finite()) {
                return Err(Error::RealityLost(f64::NAN));
            }
            equilibrium_measures(&build_curve(g, &s.x, &s.u)?)
        })
        .collect::<Result<_>>()?;
    Ok(IsoequilibriumTrajectory { flow, initial, measures })
}

/// Certificate that every `ρ_j` equals `k_j/N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalMeasure {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: Vec<usize>,
}

/// Smallest `N ≤ n_max` with integers `k_j ≥ 1`, `Σk_j = N`, `|ρ_j - k_j/N| < tol`.
pub fn rational_measure_detect(m: &MeasureVector, n_max: usize, tol: f64) -> Option<RationalMeasure> {
    (m.rho.len()..=n_max).find_map(|n| {
        let nf = n as f64;
        let k: Vec<usize> = m.rho.iter().map(|r| (r * nf).round().max(0.0) as usize).collect();
        let ok = k.iter().all(|&kj| kj >= 1)
            && k.iter().sum::<usize>() == n
            && m.rho.iter().zip(&k).all(|(r, &kj)| (r - kj as f64 / nf).abs() < tol);
        ok.then_some(RationalMeasure { n, k })
    })
}

/// Measure report `{"rho", "b_periods", "rational"}`.
pub fn measure_report(curve: &CurveSpec, n_max: usize, tol: f64) -> Result<Value> {
    let m = equilibrium_measures(curve)?;
    let b: Vec<[f64; 2]> = measures_to_bperiods(&m).iter().map(|z| [z.re, z.im]).collect();
    let rational = rational_measure_detect(&m, n_max, tol);
    Ok(json!({ "rho": m.rho, "b_periods": b, "rational": rational }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_polynomial_and_measures() {
        let c = build_curve(1, &[2.0], &[3.0]).unwrap();
        let q = gap_vanishing_polynomial(&c).unwrap();
        assert!((q[0] + 1.5).abs() < 1e-9 && q[1] == 1.0);
        let m = equilibrium_measures(&c).unwrap();
        assert!((m.rho[0] - 0.5).abs() < 1e-8 && (m.rho[1] - 0.5).abs() < 1e-8);
        let b = measures_to_bperiods(&m);
        assert!((b[0] - Complex64::new(0.0, PI)).norm() < 1e-7);
    }

    #[test]
    fn dictionary_arithmetic() {
        let m = MeasureVector::new(vec![1.0 / 3.0; 3]).unwrap();
        let b = measures_to_bperiods(&m);
        assert!((b[0].im - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((b[1].im - 4.0 * PI / 3.0).abs() < 1e-14);
        let back = bperiods_to_measures(&b).unwrap();
        for (a, r) in back.rho.iter().zip(&m.rho) {
            assert!((a - r).abs() < 1e-12);
        }
    }

    #[test]
    fn rational_detection() {
        let half = MeasureVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(rational_measure_detect(&half, 8, 1e-8), Some(RationalMeasure { n: 2, k: vec![1, 1] }));
        let off = MeasureVector::new(vec![0.501, 0.499]).unwrap();
        let hit = rational_measure_detect(&off, 8, 1e-9);
        assert!(hit.is_none());
        let hit = rational_measure_detect(&off, 1000, 1e-9);
        assert_eq!(hit.map(|h| h.n), Some(1000));
    }

    #[test]
    fn symmetric_quartic_support() {
        // [-√½,-½] ∪ [½,√½] mapped affinely so the first band is [0,1].
        let (r, d) = (0.5f64.sqrt(), 0.5f64.sqrt() - 0.5);
        let sys = IntervalSystem { bands: vec![(0.0, 1.0), ((0.5 + r) / d, 2.0 * r / d)] };
        let m = equilibrium_measures(&sys.to_curve().unwrap()).unwrap();
        assert!((m.rho[0] - m.rho[1]).abs() < 1e-8);
    }
}
