//! Triangular residue matrices `A_a = [[-¼, A^{12}_a], [0, ¼]]` with
//! `A^{12}_a = (t/4)·Ω_α(P_a)·φ(P_a)`, and checks of the constrained
//! Schlesinger system (`K = g`) along the isoperiodic family.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::curve::{build_curve, BranchId, CurveSpec};
use crate::error::Result;
use crate::frame::Frame;
use crate::isoflow::{first_order_rhs_frame, newton_period_corrector_with, NewtonOptions};
use crate::linalg::CMat;
use crate::report::Report;

/// Bound on `|Σ_a A_a - diag(-(g+1)/2, (g+1)/2)|`.
pub const SUM_RULE_TOL: f64 = 1e-10;
/// Bound on the finite-difference residual of the system.
pub const CONSTRAINED_TOL: f64 = 1e-6;
/// Bound on the agreement of the matrix and scalar residuals.
pub const SCALAR_FORM_TOL: f64 = 1e-12;
/// Bound on the flow identity relating `A^{12}` ratios to `∂u/∂x`.
pub const FLOW_IDENTITY_TOL: f64 = 1e-10;
/// Quadrature tolerance of the finite-difference family.
pub const FD_QUAD_TOL: f64 = 1e-13;

/// A 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const QUARTER: f64 = 0.25;

/// `[[-¼, a12], [0, ¼]]`.
pub fn residue_matrix(a12: Complex64) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::new(-QUARTER, 0.0), a12], [z, Complex64::new(QUARTER, 0.0)]]
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn add_scaled(acc: &mut Mat2, m: &Mat2, s: Complex64) {
    for i in 0..2 {
        for j in 0..2 {
            acc[i][j] += m[i][j] * s;
        }
    }
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    let (ab, ba) = (mul(a, b), mul(b, a));
    let mut out = ab;
    add_scaled(&mut out, &ba, Complex64::new(-1.0, 0.0));
    out
}

fn max_entry(m: &Mat2) -> f64 {
    m.iter().flatten().fold(0.0, |s, z| s.max(z.norm()))
}

/// Residue matrices at every branch point, in branch order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueMatrixSet {
    pub matrices: Vec<(BranchId, Mat2)>,
    pub t_param: Complex64,
}

impl ResidueMatrixSet {
    /// `A_a`.
    pub fn get(&self, a: BranchId) -> Option<&Mat2> {
        self.matrices.iter().find(|(b, _)| *b == a).map(|(_, m)| m)
    }

    /// `A^{12}_a`; zero for an unknown id.
    pub fn a12(&self, a: BranchId) -> Complex64 {
        self.get(a).map(|m| m[0][1]).unwrap_or_default()
    }

    /// `Σ_a A_a`.
    pub fn sum(&self) -> Mat2 {
        let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (_, m) in &self.matrices {
            add_scaled(&mut acc, m, Complex64::new(1.0, 0.0));
        }
        acc
    }

    /// Branch id → `[[re, im] × 4]` (row-major).
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (a, m) in &self.matrices {
            let entries: Vec<Value> = m.iter().flatten().map(|z| serde_json::json!([z.re, z.im])).collect();
            map.insert(a.to_string(), Value::Array(entries));
        }
        Value::Object(map)
    }
}

/// Matrices from an already computed frame.
pub fn residue_matrices_from_frame(frame: &Frame, t_param: Complex64) -> ResidueMatrixSet {
    let matrices = frame
        .curve()
        .branch_ids()
        .into_iter()
        .map(|a| (a, residue_matrix(t_param * QUARTER * frame.omega_at(a) * frame.phi_at(a))))
        .collect();
    ResidueMatrixSet { matrices, t_param }
}

/// Matrices for `Ω_α` on `curve`.
pub fn build_residue_matrices(curve: &CurveSpec, alpha: &[Complex64], t_param: Complex64) -> Result<ResidueMatrixSet> {
    let frame = Frame::new(curve, alpha, FD_QUAD_TOL)?;
    Ok(residue_matrices_from_frame(&frame, t_param))
}

/// Max entry of `Σ_a A_a - diag(-(g+1)/2, (g+1)/2)`.
pub fn sum_rule_error(set: &ResidueMatrixSet, genus: usize) -> f64 {
    let half = (genus + 1) as f64 / 2.0;
    let mut s = set.sum();
    s[0][0] += half;
    s[1][1] -= half;
    max_entry(&s)
}

/// True when the sum rule holds within [`SUM_RULE_TOL`].
pub fn sum_rule_check(set: &ResidueMatrixSet, genus: usize) -> bool {
    sum_rule_error(set, genus) <= SUM_RULE_TOL
}

/// Right-hand side of `∂_{x_i} A_a` (`i` 1-based) with `du[m][i] = ∂u_m/∂x_i`.
pub fn matrix_rhs(set: &ResidueMatrixSet, curve: &CurveSpec, du: &CMat, i: usize, a: BranchId) -> Mat2 {
    let g = curve.genus();
    let xi = BranchId::X(i);
    let val = |b: BranchId| curve.value(b);
    let m_of = |b: BranchId| *set.get(b).expect("complete set");
    let one = Complex64::new(1.0, 0.0);
    let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
    let aa = m_of(a);
    match a {
        BranchId::X(k) if k == i => {
            for (b, mb) in &set.matrices {
                if *b != xi {
                    add_scaled(&mut acc, &commutator(&aa, mb), -one / (val(xi) - val(*b)));
                }
            }
            for k in 1..=g {
                let uk = BranchId::U(k);
                add_scaled(&mut acc, &commutator(&m_of(uk), &aa), du[k - 1][i - 1] / (val(uk) - val(xi)));
            }
        }
        BranchId::U(m) => {
            add_scaled(&mut acc, &commutator(&m_of(xi), &aa), one / (val(xi) - val(a)));
            for k in (1..=g).filter(|&k| k != m) {
                let uk = BranchId::U(k);
                add_scaled(&mut acc, &commutator(&m_of(uk), &aa), du[k - 1][i - 1] / (val(uk) - val(a)));
            }
            for (b, mb) in &set.matrices {
                if *b != a {
                    add_scaled(&mut acc, &commutator(mb, &aa), -du[m - 1][i - 1] / (val(*b) - val(a)));
                }
            }
        }
        _ => {
            add_scaled(&mut acc, &commutator(&m_of(xi), &aa), one / (val(xi) - val(a)));
            for k in 1..=g {
                let uk = BranchId::U(k);
                add_scaled(&mut acc, &commutator(&m_of(uk), &aa), du[k - 1][i - 1] / (val(uk) - val(a)));
            }
        }
    }
    acc
}

/// Scalar right-hand side of `∂_{x_i} A^{12}_a`: every commutator of two
/// triangular matrices with diagonal `(-¼, ¼)` is `(A^{12} - B^{12})/2` in the
/// corner and zero elsewhere.
pub fn scalar_rhs(set: &ResidueMatrixSet, curve: &CurveSpec, du: &CMat, i: usize, a: BranchId) -> Complex64 {
    let g = curve.genus();
    let xi = BranchId::X(i);
    let val = |b: BranchId| curve.value(b);
    let c = |p: BranchId, q: BranchId| 0.5 * (set.a12(p) - set.a12(q));
    let mut acc = Complex64::new(0.0, 0.0);
    match a {
        BranchId::X(k) if k == i => {
            for (b, _) in &set.matrices {
                if *b != xi {
                    acc -= c(xi, *b) / (val(xi) - val(*b));
                }
            }
            for k in 1..=g {
                let uk = BranchId::U(k);
                acc += c(uk, xi) / (val(uk) - val(xi)) * du[k - 1][i - 1];
            }
        }
        BranchId::U(m) => {
            acc += c(xi, a) / (val(xi) - val(a));
            for k in (1..=g).filter(|&k| k != m) {
                let uk = BranchId::U(k);
                acc += c(uk, a) / (val(uk) - val(a)) * du[k - 1][i - 1];
            }
            for (b, _) in &set.matrices {
                if *b != a {
                    acc -= du[m - 1][i - 1] * c(*b, a) / (val(*b) - val(a));
                }
            }
        }
        _ => {
            acc += c(xi, a) / (val(xi) - val(a));
            for k in 1..=g {
                let uk = BranchId::U(k);
                acc += c(uk, a) / (val(uk) - val(a)) * du[k - 1][i - 1];
            }
        }
    }
    acc
}

/// `-(A^{12}_{x_i}/A^{12}_{u_m})·∏_{α≠m}(x_i-u_α)/(u_m-u_α)` as a matrix
/// `[m][i]`.
pub fn flow_from_residues(set: &ResidueMatrixSet, curve: &CurveSpec) -> CMat {
    let g = curve.genus();
    let (x, u) = (curve.x(), curve.u());
    (1..=g)
        .map(|m| {
            (1..=g)
                .map(|i| {
                    let prod: f64 =
                        (0..g).filter(|&a| a + 1 != m).map(|a| (x[i - 1] - u[a]) / (u[m - 1] - u[a])).product();
                    -set.a12(BranchId::X(i)) / set.a12(BranchId::U(m)) * prod
                })
                .collect()
        })
        .collect()
}

/// Finite-difference check of the constrained system along the isoperiodic
/// family through `curve` (u corrected by Newton at `x ± h·e_i`).
///
/// Checks: matrix form, scalar corner form, their agreement, the sum form of
/// the `x_i` equation, the sum rule at every shifted curve, and the flow
/// identity at the base curve.
pub fn constrained_residual(curve: &CurveSpec, alpha: &[Complex64], t_param: Complex64, h: f64) -> Result<Report> {
    let g = curve.genus();
    let frame = Frame::new(curve, alpha, FD_QUAD_TOL)?;
    let base = residue_matrices_from_frame(&frame, t_param);
    let du = first_order_rhs_frame(&frame)?;
    let target = frame.b_periods();
    let opts = NewtonOptions { quad_tol: FD_QUAD_TOL, ..NewtonOptions::default() };
    let mut full = 0.0f64;
    let mut scalar = 0.0f64;
    let mut sum_form = 0.0f64;
    let mut sum_rule = sum_rule_error(&base, g);
    for i in 1..=g {
        let mut shifted = Vec::with_capacity(2);
        for sign in [1.0, -1.0] {
            let mut x = curve.x().to_vec();
            x[i - 1] += sign * h;
            let u = newton_period_corrector_with(curve, alpha, &target, &x, &opts)?;
            let c = build_curve(g, &x, &u)?;
            let set = build_residue_matrices(&c, alpha, t_param)?;
            sum_rule = sum_rule.max(sum_rule_error(&set, g));
            shifted.push(set);
        }
        let mut total = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in curve.branch_ids() {
            let (p, m) = (shifted[0].get(a).expect("complete set"), shifted[1].get(a).expect("complete set"));
            let mut fd = *p;
            add_scaled(&mut fd, m, Complex64::new(-1.0, 0.0));
            let fd_scale = Complex64::new(1.0 / (2.0 * h), 0.0);
            let mut diff = [[Complex64::new(0.0, 0.0); 2]; 2];
            add_scaled(&mut diff, &fd, fd_scale);
            add_scaled(&mut total, &diff, Complex64::new(1.0, 0.0));
            let rhs = matrix_rhs(&base, curve, &du, i, a);
            add_scaled(&mut diff, &rhs, Complex64::new(-1.0, 0.0));
            full = full.max(max_entry(&diff));
            let fd12 = (p[0][1] - m[0][1]) / (2.0 * h);
            scalar = scalar.max((fd12 - scalar_rhs(&base, curve, &du, i, a)).norm());
        }
        sum_form = sum_form.max(max_entry(&total));
    }
    let flow = flow_from_residues(&base, curve);
    let mut flow_err = 0.0f64;
    for m in 0..g {
        for i in 0..g {
            flow_err = flow_err.max((flow[m][i] - du[m][i]).norm() / du[m][i].norm().max(1.0));
        }
    }
    let mut rep = Report::default();
    rep.push("constrained_matrix_form", full, CONSTRAINED_TOL);
    rep.push("constrained_scalar_form", scalar, CONSTRAINED_TOL);
    rep.push("scalar_matches_matrix", (full - scalar).abs(), SCALAR_FORM_TOL);
    rep.push("sum_derivative_vanishes", sum_form, CONSTRAINED_TOL);
    rep.push("sum_rule", sum_rule, SUM_RULE_TOL);
    rep.push("flow_identity", flow_err, FLOW_IDENTITY_TOL);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_of_triangular_matrices() {
        let a = residue_matrix(Complex64::new(0.3, -0.1));
        let b = residue_matrix(Complex64::new(-1.2, 0.4));
        let c = commutator(&a, &b);
        assert_eq!(c[0][0], Complex64::new(0.0, 0.0));
        assert_eq!(c[1][1], Complex64::new(0.0, 0.0));
        assert_eq!(c[1][0], Complex64::new(0.0, 0.0));
        assert!((c[0][1] - Complex64::new(0.75, -0.25)).norm() < 1e-15);
    }
}
