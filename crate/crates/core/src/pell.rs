//! Generalized Chebyshev polynomials: `P² - Δ Q² = 1` on a real support.
//!
//! `P_N = ±cosh(N G)` off the support and `±cos(N G)` on it, where `G` is the
//! antiderivative of `|q_g|/√|Δ|` from the nearest branch point on the left.

use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{build_curve, CurveSpec};
use crate::equilibrium::{equilibrium_measures, gap_vanishing_polynomial, RATIONAL_TOL};
use crate::error::{Error, Result};
use crate::periods::{endpoint_integral, DEFAULT_QUAD_TOL};
use crate::poly;

/// Residue allowed in the square-root extraction of `Q²`.
pub const SQRT_RESIDUE_TOL: f64 = 1e-8;
/// Coefficient tolerance for parity checks, relative to the largest coefficient.
pub const PARITY_TOL: f64 = 1e-12;
/// Grid points per band in [`default_grid`].
pub const GRID_PER_BAND: usize = 512;

/// A verified generalized Chebyshev polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PellCertificate {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "P")]
    pub p: Vec<f64>,
    #[serde(rename = "Q")]
    pub q: Vec<f64>,
    pub delta: Vec<f64>,
    pub residual: f64,
    pub signature: Vec<usize>,
}

impl PellCertificate {
    /// `{"N", "P", "Q", "residual", "signature"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "P": self.p,
            "Q": self.q,
            "residual": self.residual,
            "signature": self.signature,
        })
    }
}

/// `±1` value of `P_N` at the left end of each band, leading coefficient positive.
fn band_signs(k: &[usize], n: usize) -> Vec<f64> {
    let mut s = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    k.iter()
        .map(|&kj| {
            let here = s;
            if kj % 2 == 1 {
                s = -s;
            }
            here
        })
        .collect()
}

/// `P_N(z)` from the Green-function antiderivative.
fn sample_p(curve: &CurveSpec, q: &[f64], signs: &[f64], n: usize, z: f64) -> Result<f64> {
    let bands = curve.bands();
    let nf = n as f64;
    if z <= 0.0 {
        let gz = endpoint_integral(curve, q, 0.0, z, DEFAULT_QUAD_TOL)?.abs();
        return Ok(signs[0] * (nf * gz).cosh());
    }
    for (j, &(lo, hi)) in bands.iter().enumerate() {
        if z <= hi {
            let gz = endpoint_integral(curve, q, lo, z, DEFAULT_QUAD_TOL)?.abs();
            return Ok(signs[j] * (nf * gz).cos());
        }
        let right = bands.get(j + 1).map_or(f64::INFINITY, |b| b.0);
        if z < right {
            // Past the band P has sign (-1)^{k_j} relative to its left end.
            let s_right = signs.get(j + 1).copied().unwrap_or(1.0);
            let gz = endpoint_integral(curve, q, hi, z, DEFAULT_QUAD_TOL)?.abs();
            return Ok(s_right * (nf * gz).cosh());
        }
    }
    unreachable!("every real point lies left of 0, in a band, or right of a band")
}

/// Checks `|ρ_j - k_j/N| < tol` for the equilibrium measures of `curve`.
fn check_rational(curve: &CurveSpec, n: usize, k: &[usize], tol: f64) -> Result<()> {
    let g = curve.genus();
    if k.len() != g + 1 {
        return Err(Error::DimensionMismatch { expected: g + 1, got: k.len() });
    }
    if k.iter().sum::<usize>() != n || k.contains(&0) {
        return Err(Error::NotRational(format!("k = {k:?} is not a positive split of N = {n}")));
    }
    let m = equilibrium_measures(curve)?;
    for (j, (r, &kj)) in m.rho.iter().zip(k).enumerate() {
        let off = (r - kj as f64 / n as f64).abs();
        if off >= tol {
            return Err(Error::NotRational(format!("band {j}: rho = {r}, k/N off by {off:e}")));
        }
    }
    Ok(())
}

/// Builds `P_N` and `Q` for a curve whose measures are `k/N`.
pub fn chebyshev_from_curve(curve: &CurveSpec, n: usize, k: &[usize]) -> Result<PellCertificate> {
    let g = curve.genus();
    check_rational(curve, n, k, RATIONAL_TOL)?;
    let q = gap_vanishing_polynomial(curve)?;
    let signs = band_signs(k, n);
    let ug = curve.u()[g - 1];
    let (lo, hi) = (-0.1, ug + 0.1);
    let values: Vec<f64> = poly::chebyshev_nodes(n + 1, lo, hi)
        .into_iter()
        .map(|z| sample_p(curve, &q, &signs, n, z))
        .collect::<Result<_>>()?;
    let mut p = poly::chebyshev_interpolate(&values, lo, hi);
    p.resize(n + 1, 0.0);
    let delta = curve.delta_poly();
    let qpoly = pell_cofactor(&p, &delta)?;
    let grid = default_grid(&curve.bands());
    let residual = pell_residual(&p, &qpoly, &delta, &grid);
    let signature = signature_on(&p, &curve.bands());
    Ok(PellCertificate { n, p, q: qpoly, delta, residual, signature })
}

/// `Q` with positive leading coefficient and `Q² = (P² - 1)/Δ`.
pub fn pell_cofactor(p: &[f64], delta: &[f64]) -> Result<Vec<f64>> {
    let p2m1 = poly::sub(&poly::mul(p, p), &[1.0]);
    let (q2, rem) = poly::divrem(&p2m1, delta);
    let scale = p2m1.iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let rem_norm = rem.iter().fold(0.0f64, |m, c| m.max(c.abs())) / scale;
    if rem_norm > SQRT_RESIDUE_TOL {
        return Err(Error::NotPerfectSquare(rem_norm));
    }
    let (q, residue) = poly::sqrt_poly(&q2)?;
    if residue > SQRT_RESIDUE_TOL {
        return Err(Error::NotPerfectSquare(residue));
    }
    Ok(q)
}

/// Affinely maps `bands` so the first is `[0,1]`, builds the certificate and
/// maps it back. `P` keeps a positive leading coefficient; `Δ` is monic in `z`.
pub fn chebyshev_on_support(bands: &[(f64, f64)], n: usize, k: &[usize]) -> Result<PellCertificate> {
    let (a, b) = *bands.first().ok_or_else(|| Error::InvalidInput("no bands".into()))?;
    let len = b - a;
    let to_u = |z: f64| (z - a) / len;
    let x: Vec<f64> = bands[1..].iter().map(|s| to_u(s.0)).collect();
    let u: Vec<f64> = bands[1..].iter().map(|s| to_u(s.1)).collect();
    let curve = build_curve(bands.len() - 1, &x, &u)?;
    let cert = chebyshev_from_curve(&curve, n, k)?;
    // u = (z - a)/len, Δ_z = len^{2g+2} Δ_u, Q_z = Q_u / len^{g+1}.
    let mut p = poly::compose_affine(&cert.p, -a / len, 1.0 / len);
    p.resize(n + 1, 0.0);
    let qz = poly::scale(&poly::compose_affine(&cert.q, -a / len, 1.0 / len), len.powi(-(bands.len() as i32)));
    let ends: Vec<f64> = bands.iter().flat_map(|s| [s.0, s.1]).collect();
    let delta = poly::from_roots(&ends);
    let grid = default_grid(bands);
    let residual = pell_residual(&p, &qz, &delta, &grid);
    let signature = signature_on(&p, bands);
    Ok(PellCertificate { n, p, q: qz, delta, residual, signature })
}

/// Chebyshev points on every band plus the midpoint of every gap.
pub fn default_grid(bands: &[(f64, f64)]) -> Vec<f64> {
    let mut grid = Vec::new();
    for (j, &(lo, hi)) in bands.iter().enumerate() {
        grid.extend(poly::chebyshev_nodes(GRID_PER_BAND, lo, hi));
        grid.push(lo);
        grid.push(hi);
        if let Some(next) = bands.get(j + 1) {
            grid.push(0.5 * (hi + next.0));
        }
    }
    grid
}

/// `max |P² - 1 - ΔQ²|` over the grid.
pub fn pell_residual(p: &[f64], q: &[f64], delta: &[f64], grid: &[f64]) -> f64 {
    pell_residual_with_rhs(p, q, delta, 1.0, grid)
}

/// `max |P² - ΔQ² - rhs|` over the grid.
pub fn pell_residual_with_rhs(p: &[f64], q: &[f64], delta: &[f64], rhs: f64, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&z| {
            let (pv, qv) = (poly::eval(p, z), poly::eval(q, z));
            (pv * pv - poly::eval(delta, z) * qv * qv - rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Zeros of `Q` in the support hull, each certified as a double zero of
/// `P² - 1` (both `|P² - 1|` and `|2PP'|` below `tol`, relative to `max|P|²`
/// on the hull).
pub fn double_zeros(cert: &PellCertificate, curve: &CurveSpec, tol: f64) -> Result<Vec<f64>> {
    let (lo, hi) = (0.0, curve.u()[curve.genus() - 1]);
    let q = &cert.q;
    let expected = poly::sturm_count(q, lo, hi);
    let grid: Vec<f64> = (0..=GRID_PER_BAND * curve.bands().len())
        .map(|i| lo + (hi - lo) * i as f64 / (GRID_PER_BAND * curve.bands().len()) as f64)
        .collect();
    let mut zeros = Vec::new();
    for w in grid.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (fa, fb) = (poly::eval(q, a), poly::eval(q, b));
        if fa == 0.0 {
            zeros.push(a);
            continue;
        }
        if fa * fb > 0.0 {
            continue;
        }
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if poly::eval(q, a) * poly::eval(q, m) <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        zeros.push(0.5 * (a + b));
    }
    if zeros.len() != expected {
        return Err(Error::InvariantViolation(format!(
            "located {} zeros of Q, Sturm count is {expected}",
            zeros.len()
        )));
    }
    let scale = grid.iter().fold(1.0f64, |m, &z| m.max(poly::eval(&cert.p, z).powi(2)));
    let dp = poly::derivative(&cert.p);
    for &z in &zeros {
        let pz = poly::eval(&cert.p, z);
        let value = (pz * pz - 1.0).abs() / scale;
        let slope = (2.0 * pz * poly::eval(&dp, z)).abs() / scale;
        if value > tol || slope > tol {
            return Err(Error::InvariantViolation(format!(
                "zero {z} of Q is not a double zero of P² - 1 ({value:e}, {slope:e})"
            )));
        }
    }
    Ok(zeros)
}

/// Zeros of `P'` strictly inside each band of the curve.
pub fn signature_of(p: &[f64], curve: &CurveSpec) -> Vec<usize> {
    signature_on(p, &curve.bands())
}

/// Zeros of `P'` strictly inside each band.
pub fn signature_on(p: &[f64], bands: &[(f64, f64)]) -> Vec<usize> {
    let d = poly::derivative(p);
    bands.iter().map(|&(lo, hi)| poly::sturm_count(&d, lo, hi)).collect()
}

fn max_abs(p: &[f64]) -> f64 {
    p.iter().fold(0.0f64, |m, c| m.max(c.abs()))
}

/// Coefficients of the given parity (0 even, 1 odd), after checking the other
/// parity vanishes.
fn split_parity(p: &[f64], keep: usize) -> Result<Vec<f64>> {
    let scale = max_abs(p).max(1.0);
    let off = p.iter().skip(1 - keep).step_by(2).fold(0.0f64, |m, c| m.max(c.abs()));
    if off > PARITY_TOL * scale {
        return Err(Error::ParityViolation(off));
    }
    Ok(p.iter().skip(keep).step_by(2).copied().collect())
}

/// `p̂` with `P(z) = p̂(z²)`.
pub fn parity_reduce(p: &[f64]) -> Result<Vec<f64>> {
    split_parity(p, 0)
}

/// `p̂` with `P(z) = z·p̂(z²)`.
pub fn parity_reduce_odd(p: &[f64]) -> Result<Vec<f64>> {
    split_parity(p, 1)
}

/// `P(z) = p̂(z²)` or `z·p̂(z²)`.
pub fn parity_lift(p_hat: &[f64], odd: bool) -> Vec<f64> {
    let mut out = vec![0.0; 2 * p_hat.len() - 1 + usize::from(odd)];
    for (j, &c) in p_hat.iter().enumerate() {
        out[2 * j + usize::from(odd)] = c;
    }
    out
}

/// A Pell relation transported to `w = z²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParityReduction {
    pub odd: bool,
    pub p_hat: Vec<f64>,
    /// `Δ(z)Q(z)²` as a polynomial in `w`.
    pub rhs_hat: Vec<f64>,
    /// `max |w^{odd}·p̂² - 1 - rhs_hat|` on the grid.
    pub residual: f64,
    /// `2w·p̂² - 1` in the odd case.
    pub p_tilde: Option<Vec<f64>>,
    /// `max |p̃² - 1 - 4w·p̂²·rhs_hat|` on the grid.
    pub tilde_residual: Option<f64>,
}

/// Reduces `P² - ΔQ² = 1` for even or odd `P` to `w = z²` and verifies the
/// resulting relation on the squared grid. In the odd case also verifies the
/// Pell equation of `2w·p̂² - 1`.
pub fn reduce_pell(p: &[f64], q: &[f64], delta: &[f64], grid: &[f64]) -> Result<ParityReduction> {
    let odd = poly::trim(p, 0.0).len().is_multiple_of(2);
    let p_hat = if odd { parity_reduce_odd(p)? } else { parity_reduce(p)? };
    let rhs_hat = parity_reduce(&poly::mul(delta, &poly::mul(q, q)))?;
    let w_grid: Vec<f64> = grid.iter().map(|z| z * z).collect();
    let wp2 = |w: f64| {
        let v = poly::eval(&p_hat, w);
        if odd {
            w * v * v
        } else {
            v * v
        }
    };
    let residual = w_grid.iter().map(|&w| (wp2(w) - 1.0 - poly::eval(&rhs_hat, w)).abs()).fold(0.0, f64::max);
    let (p_tilde, tilde_residual) = if odd {
        let pt = poly::sub(&poly::scale(&poly::mul(&[0.0, 1.0], &poly::mul(&p_hat, &p_hat)), 2.0), &[1.0]);
        let r = w_grid
            .iter()
            .map(|&w| {
                let t = poly::eval(&pt, w);
                let ph = poly::eval(&p_hat, w);
                (t * t - 1.0 - 4.0 * w * ph * ph * poly::eval(&rhs_hat, w)).abs()
            })
            .fold(0.0, f64::max);
        (Some(pt), Some(r))
    } else {
        (None, None)
    };
    Ok(ParityReduction { odd, p_hat, rhs_hat, residual, p_tilde, tilde_residual })
}

/// Symmetric z-support over a nonnegative w-support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricSupport {
    pub half: Vec<(f64, f64)>,
    pub lifted: Vec<(f64, f64)>,
}

impl SymmetricSupport {
    /// Nonnegative halves of the lifted bands, squared.
    pub fn squared(&self) -> Vec<(f64, f64)> {
        self.lifted.iter().filter(|b| b.1 > 0.0).map(|&(lo, hi)| (lo.max(0.0).powi(2), hi * hi)).collect()
    }
}

/// `z`-bands `±√(w-band)`; with `includes_zero` the first w-band `[0, w₁]`
/// lifts to the single central band `[-√w₁, √w₁]`.
pub fn symmetric_lift(half: &[(f64, f64)], includes_zero: bool) -> Result<SymmetricSupport> {
    for &(lo, hi) in half {
        for e in [lo, hi] {
            if e < 0.0 {
                return Err(Error::NegativeEndpoint(e));
            }
        }
        if lo >= hi {
            return Err(Error::OrderingViolation(format!("band [{lo}, {hi}] is empty")));
        }
    }
    if half.windows(2).any(|w| w[0].1 >= w[1].0) {
        return Err(Error::OrderingViolation("w-bands overlap or are unsorted".into()));
    }
    let first_zero = half.first().is_some_and(|b| b.0 == 0.0);
    if includes_zero != first_zero {
        return Err(Error::InvalidInput(format!(
            "includes_zero = {includes_zero} but the first band starts at {}",
            half.first().map_or(f64::NAN, |b| b.0)
        )));
    }
    let pos: Vec<(f64, f64)> = half.iter().map(|&(lo, hi)| (lo.sqrt(), hi.sqrt())).collect();
    let skip = usize::from(includes_zero);
    let mut lifted: Vec<(f64, f64)> = pos[skip..].iter().rev().map(|&(lo, hi)| (-hi, -lo)).collect();
    if includes_zero {
        lifted.push((-pos[0].1, pos[0].1));
    }
    lifted.extend_from_slice(&pos[skip..]);
    Ok(SymmetricSupport { half: half.to_vec(), lifted })
}
