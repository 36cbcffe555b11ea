//! Analytic derivative formulas for period data, checked against centered
//! finite differences of quadrature-computed quantities.
//!
//! Two kinds of perturbation are used. Free perturbations move one branch
//! point with all others fixed (the Rauch setting). Family perturbations move
//! `x_i` and re-solve `u` with the Newton corrector so the b-periods of `Ω_α`
//! stay fixed.

use num_complex::Complex64;

use crate::curve::{build_curve, BranchId, CurveSpec};
use crate::error::Result;
use crate::frame::Frame;
use crate::isoflow::{first_order_rhs_frame, newton_period_corrector_with, NewtonOptions};
use crate::linalg::CMat;
use crate::report::Report;

/// Quadrature tolerance for finite-difference frames.
pub const FD_QUAD_TOL: f64 = 1e-13;
/// Relative error allowed per formula group.
pub const VARIATIONAL_TOL: f64 = 1e-5;
/// Errors below this are treated as the finite-difference noise floor in the
/// order check.
pub const FD_NOISE_FLOOR: f64 = 1e-9;

/// Names of the formula groups in report order.
pub const GROUPS: [&str; 8] = [
    "rauch_riemann",
    "rauch_omega",
    "omega_self_shift",
    "omega_at_fixed_point",
    "omega_at_dependent_point",
    "omega_at_moving_point",
    "phi_values",
    "v_values",
];

#[derive(Default, Clone, Copy)]
struct Acc {
    diff: f64,
    size: f64,
}

impl Acc {
    fn add(&mut self, analytic: Complex64, fd: Complex64) {
        self.diff = self.diff.max((analytic - fd).norm());
        self.size = self.size.max(analytic.norm());
    }

    fn rel(&self) -> f64 {
        if self.size == 0.0 {
            self.diff
        } else {
            self.diff / self.size
        }
    }
}

fn cd(p: Complex64, m: Complex64, h: f64) -> Complex64 {
    (p - m) / (2.0 * h)
}

fn half() -> Complex64 {
    Complex64::new(0.5, 0.0)
}

struct Ctx<'a> {
    frame: &'a Frame,
    du: CMat,
}

impl Ctx<'_> {
    fn c(&self) -> &CurveSpec {
        self.frame.curve()
    }

    fn val(&self, a: BranchId) -> f64 {
        self.c().value(a)
    }

    fn om(&self, a: BranchId) -> Complex64 {
        self.frame.omega_at(a)
    }

    fn phi(&self, a: BranchId) -> Complex64 {
        self.frame.phi_at(a)
    }

    fn du(&self, m: usize, i: usize) -> Complex64 {
        self.du[m - 1][i - 1]
    }

    /// `∂Ω(P_a)/∂x_i` along the family for `a ∉ {x_i, u_1…u_g}`.
    fn omega_fixed(&self, i: usize, a: BranchId) -> Complex64 {
        let xi = BranchId::X(i);
        let (xv, av) = (self.val(xi), self.val(a));
        let prod: f64 = self.c().u().iter().map(|ua| (xv - ua) / (av - ua)).product();
        self.om(xi) * self.phi(xi) / (2.0 * (xv - av) * self.phi(a)) * prod
    }

    /// `Σ_{b≠a} Ω(P_b)φ(P_b)/(b-a)`.
    fn weighted_sum(&self, a: BranchId) -> Complex64 {
        let av = self.val(a);
        self.c()
            .branch_ids()
            .into_iter()
            .filter(|&b| b != a)
            .map(|b| self.om(b) * self.phi(b) / (self.val(b) - av))
            .sum()
    }

    /// `∂Ω(P_{u_m})/∂x_i` along the family.
    fn omega_dependent(&self, i: usize, m: usize) -> Complex64 {
        let um_id = BranchId::U(m);
        let (um, xi) = (self.val(um_id), self.val(BranchId::X(i)));
        let am: f64 = (1..=self.c().genus()).filter(|&a| a != m).map(|a| 1.0 / (um - self.val(BranchId::U(a)))).sum();
        let om = self.om(um_id);
        let s = self.weighted_sum(um_id) / (om * self.phi(um_id));
        om / 2.0 * (-1.0 / (xi - um) + am - s) * self.du(m, i)
    }

    /// `∂Ω(P_{x_k})/∂x_k` along the family.
    fn omega_moving(&self, k: usize) -> Complex64 {
        let xk_id = BranchId::X(k);
        let xk = self.val(xk_id);
        let u = self.c().u();
        let g = u.len();
        let lag: f64 = (0..g)
            .map(|a| {
                let p: f64 = (0..g).filter(|&b| b != a).map(|b| (xk - u[b]) / (u[a] - u[b])).product();
                p / (u[a] - xk)
            })
            .sum();
        -half() * (self.om(xk_id) * lag + self.weighted_sum(xk_id) / self.phi(xk_id))
    }

    /// `∂φ(P_a)/∂x_i` for `a ∉ {x_i, u_1…u_g}`.
    fn phi_fixed(&self, i: usize, a: BranchId) -> Complex64 {
        let av = self.val(a);
        let mut t = Complex64::new(1.0 / (av - self.val(BranchId::X(i))), 0.0);
        for al in 1..=self.c().genus() {
            t += self.du(al, i) / (av - self.val(BranchId::U(al)));
        }
        self.phi(a) / 2.0 * t
    }

    /// `∂φ(P_{u_m})/∂x_i`.
    fn phi_dependent(&self, i: usize, m: usize) -> Complex64 {
        let um_id = BranchId::U(m);
        let um = self.val(um_id);
        let all: f64 =
            self.c().branch_ids().into_iter().filter(|&b| b != um_id).map(|b| 1.0 / (um - self.val(b))).sum();
        let mut t = Complex64::new(1.0 / (um - self.val(BranchId::X(i))), 0.0) - self.du(m, i) * all;
        for al in (1..=self.c().genus()).filter(|&a| a != m) {
            t += self.du(al, i) / (um - self.val(BranchId::U(al)));
        }
        self.phi(um_id) / 2.0 * t
    }

    /// `Σ_{α≠m} (∂u_m - ∂u_α)/(u_m - u_α)` at column `i`.
    fn spread(&self, i: usize, m: usize) -> Complex64 {
        let um = self.val(BranchId::U(m));
        (1..=self.c().genus())
            .filter(|&a| a != m)
            .map(|a| (self.du(m, i) - self.du(a, i)) / (um - self.val(BranchId::U(a))))
            .sum()
    }

    /// `∂v_m(P_a)/∂x_i` for `a ∉ {x_i, u_1…u_g}`.
    fn v_fixed(&self, i: usize, m: usize, a: BranchId) -> Complex64 {
        let c = self.c();
        let g = c.genus();
        let (av, xi, um) = (self.val(a), self.val(BranchId::X(i)), self.val(BranchId::U(m)));
        let mut t = Complex64::new(0.5 * (1.0 / (av - xi) - 1.0 / (um - xi)), 0.0) + 0.5 * self.du(m, i) / (av - um);
        for al in (1..=g).filter(|&a| a != m) {
            t -= 0.5 * self.du(al, i) / (av - self.val(BranchId::U(al)));
        }
        let near: f64 = 1.0 / um + 1.0 / (um - 1.0) + c.x().iter().map(|x| 1.0 / (um - x)).sum::<f64>();
        t += 0.5 * self.du(m, i) * near - 0.5 * self.spread(i, m);
        self.frame.v_at(m, a) * t
    }

    /// `∂v_m(P_{x_i})/∂x_i`.
    fn v_moving(&self, i: usize, m: usize) -> Complex64 {
        let c = self.c();
        let g = c.genus();
        let xi = self.val(BranchId::X(i));
        let um = self.val(BranchId::U(m));
        let xs: f64 = (1..=g).filter(|&a| a != i).map(|a| 1.0 / (xi - c.x()[a - 1])).sum();
        let mut t = Complex64::new(-0.5 * (1.0 / xi + 1.0 / (xi - 1.0) + xs), 0.0);
        for al in (1..=g).filter(|&a| a != m) {
            t += 0.5 / (xi - c.u()[al - 1]) * (1.0 - self.du(al, i));
        }
        let near: f64 =
            1.0 / um + 1.0 / (um - 1.0) + (1..=g).filter(|&a| a != i).map(|a| 1.0 / (um - c.x()[a - 1])).sum::<f64>();
        t += 0.5 * near * self.du(m, i) - 0.5 * self.spread(i, m);
        self.frame.v_at(m, BranchId::X(i)) * t
    }
}

fn movable(c: &CurveSpec) -> Vec<BranchId> {
    c.branch_ids().into_iter().filter(|a| !matches!(a, BranchId::Zero | BranchId::One)).collect()
}

/// Maximal relative error per formula group at step `h`, in [`GROUPS`] order.
pub fn variational_errors(curve: &CurveSpec, alpha: &[Complex64], h: f64) -> Result<Vec<(String, f64)>> {
    let g = curve.genus();
    let frame = Frame::new(curve, alpha, FD_QUAD_TOL)?;
    let ctx = Ctx { frame: &frame, du: first_order_rhs_frame(&frame)? };
    let ids = curve.branch_ids();
    let mut acc = [Acc::default(); 8];
    let pi_i = Complex64::new(0.0, std::f64::consts::PI);

    for &ak in &movable(curve) {
        let v = curve.value(ak);
        let fp = Frame::new(&curve.with_branch(ak, v + h)?, alpha, FD_QUAD_TOL)?;
        let fm = Frame::new(&curve.with_branch(ak, v - h)?, alpha, FD_QUAD_TOL)?;
        let (bp, bm) = (&fp.periods().data().riemann, &fm.periods().data().riemann);
        for i in 0..g {
            for j in 0..g {
                let an = pi_i * frame.hol_at(i + 1, ak) * frame.hol_at(j + 1, ak);
                acc[0].add(an, cd(bp[i][j], bm[i][j], h));
            }
        }
        for &aj in ids.iter().filter(|&&a| a != ak) {
            let w = frame.w(aj, ak)?;
            for l in 1..=g {
                let an = half() * frame.hol_at(l, ak) * w;
                acc[0].add(an, cd(fp.hol_at(l, aj), fm.hol_at(l, aj), h));
            }
            acc[1].add(half() * frame.omega_at(ak) * w, cd(fp.omega_at(aj), fm.omega_at(aj), h));
        }
        let mut s = Complex64::new(0.0, 0.0);
        for &aj in ids.iter().filter(|&&a| a != ak) {
            s += frame.omega_at(aj) * frame.w(ak, aj)?;
        }
        acc[2].add(-half() * s, cd(fp.omega_at(ak), fm.omega_at(ak), h));
    }

    let target = frame.b_periods();
    let opts = NewtonOptions { quad_tol: FD_QUAD_TOL, ..NewtonOptions::default() };
    for i in 1..=g {
        let mut fr = Vec::with_capacity(2);
        for sign in [1.0, -1.0] {
            let mut x = curve.x().to_vec();
            x[i - 1] += sign * h;
            let u = newton_period_corrector_with(curve, alpha, &target, &x, &opts)?;
            fr.push(Frame::new(&build_curve(g, &x, &u)?, alpha, FD_QUAD_TOL)?);
        }
        let (fp, fm) = (&fr[0], &fr[1]);
        let xi = BranchId::X(i);
        let fixed: Vec<BranchId> = ids.iter().copied().filter(|&a| a != xi && !matches!(a, BranchId::U(_))).collect();
        for &a in &fixed {
            acc[3].add(ctx.omega_fixed(i, a), cd(fp.omega_at(a), fm.omega_at(a), h));
            acc[6].add(ctx.phi_fixed(i, a), cd(fp.phi_at(a), fm.phi_at(a), h));
            for m in 1..=g {
                acc[7].add(ctx.v_fixed(i, m, a), cd(fp.v_at(m, a), fm.v_at(m, a), h));
            }
        }
        for m in 1..=g {
            let um = BranchId::U(m);
            acc[4].add(ctx.omega_dependent(i, m), cd(fp.omega_at(um), fm.omega_at(um), h));
            acc[6].add(ctx.phi_dependent(i, m), cd(fp.phi_at(um), fm.phi_at(um), h));
            acc[7].add(ctx.v_moving(i, m), cd(fp.v_at(m, xi), fm.v_at(m, xi), h));
        }
        acc[5].add(ctx.omega_moving(i), cd(fp.omega_at(xi), fm.omega_at(xi), h));
    }
    Ok(GROUPS.iter().zip(acc.iter()).map(|(n, a)| (n.to_string(), a.rel())).collect())
}

/// Every formula group checked at step `h` against [`VARIATIONAL_TOL`].
pub fn validate_variational(curve: &CurveSpec, alpha: &[Complex64], h: f64) -> Result<Report> {
    let mut r = Report::default();
    for (name, e) in variational_errors(curve, alpha, h)? {
        r.push(name, e, VARIATIONAL_TOL);
    }
    Ok(r)
}

/// Accuracy at `h_fine` plus second-order decay from `h_coarse` to `h_fine`.
///
/// The decay check passes when the error ratio reaches a quarter of the
/// ideal `(h_coarse/h_fine)²`, or when the fine error is already below
/// [`FD_NOISE_FLOOR`].
pub fn variational_order(curve: &CurveSpec, alpha: &[Complex64], h_coarse: f64, h_fine: f64) -> Result<Report> {
    let coarse = variational_errors(curve, alpha, h_coarse)?;
    let fine = variational_errors(curve, alpha, h_fine)?;
    let ideal = (h_coarse / h_fine).powi(2);
    let mut r = Report::default();
    for ((name, ec), (_, ef)) in coarse.iter().zip(&fine) {
        r.push(name.clone(), *ef, VARIATIONAL_TOL);
        let shortfall = if *ef < FD_NOISE_FLOOR { 0.0 } else { 0.25 * ideal * ef / ec.max(1e-300) };
        r.push(format!("{name}_order"), shortfall, 1.0);
    }
    Ok(r)
}
