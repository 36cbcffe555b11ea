//! A curve with its period data and a chosen third-kind differential `Ω_α`,
//! plus every ramification-point evaluation the variational identities use.
//!
//! Values at `P_a` are constant terms in the local parameter `ζ = √(u-a)`
//! with `φ(P_a) = 2/√Δ'(a)` evaluated on the principal branch.

use num_complex::Complex64;

use crate::curve::{BranchId, CurveSpec};
use crate::error::Result;
use crate::periods::{
    b_periods_of, eval_at_ramification, taylor2_at_ramification, third_kind_differential, DifferentialRep, Periods,
};

/// Periods of a curve together with `Ω_α`.
#[derive(Debug, Clone)]
pub struct Frame {
    periods: Periods,
    alpha: Vec<Complex64>,
    omega: DifferentialRep,
}

impl Frame {
    /// Computes periods at tolerance `tol` and `Ω_α` for the given `α`.
    pub fn new(curve: &CurveSpec, alpha: &[Complex64], tol: f64) -> Result<Self> {
        let periods = Periods::compute(curve, tol)?;
        let omega = third_kind_differential(&periods, alpha)?;
        Ok(Frame { periods, alpha: alpha.to_vec(), omega })
    }

    /// The curve.
    pub fn curve(&self) -> &CurveSpec {
        self.periods.curve()
    }

    /// Period data of the holomorphic basis.
    pub fn periods(&self) -> &Periods {
        &self.periods
    }

    /// `α`.
    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    /// `Ω_α`.
    pub fn omega(&self) -> &DifferentialRep {
        &self.omega
    }

    /// Genus.
    pub fn genus(&self) -> usize {
        self.curve().genus()
    }

    /// `Ω_α(P_a)`.
    pub fn omega_at(&self, a: BranchId) -> Complex64 {
        eval_at_ramification(self.curve(), &self.omega.coeffs, a)
    }

    /// `φ(P_a)`.
    pub fn phi_at(&self, a: BranchId) -> Complex64 {
        self.curve().phi_at_ramification(a)
    }

    /// `ω_l(P_a)`, `l` 1-based.
    pub fn hol_at(&self, l: usize, a: BranchId) -> Complex64 {
        self.periods.omega_at(l, a)
    }

    /// `v_m(P_a)` with `φ(P_a)` and `φ(P_{u_m})` evaluated separately.
    pub fn v_at(&self, m: usize, a: BranchId) -> Complex64 {
        if a == BranchId::U(m) {
            return Complex64::new(1.0, 0.0);
        }
        let c = self.curve();
        let (av, um) = (c.value(a), c.u()[m - 1]);
        let (mut num, mut den) = (1.0, 1.0);
        for (b, &ub) in c.u().iter().enumerate() {
            if b + 1 != m {
                num *= av - ub;
                den *= um - ub;
            }
        }
        self.phi_at(a) * num / (self.phi_at(BranchId::U(m)) * den)
    }

    /// `W(P_a, P_b)`, `a ≠ b`.
    pub fn w(&self, a: BranchId, b: BranchId) -> Result<Complex64> {
        self.periods.w_pair(a, b)
    }

    /// b-periods of `Ω_α`.
    pub fn b_periods(&self) -> Vec<Complex64> {
        b_periods_of(&self.periods, &self.omega)
    }

    /// `res_{P_a} Ω φ / ((u-a) du) = (Υ₀φ₂ + Υ₂φ₀)/2`.
    pub fn res_omega_phi(&self, a: BranchId) -> Complex64 {
        let one = [Complex64::new(1.0, 0.0)];
        let c = self.curve();
        let (o0, o2) = (self.omega_at(a), taylor2_at_ramification(c, &self.omega.coeffs, a));
        let (p0, p2) = (self.phi_at(a), taylor2_at_ramification(c, &one, a));
        0.5 * (o0 * p2 + o2 * p0)
    }

    /// `res_{P_a} Ω W(·, P_a) / du = (Υ₀w₀ + Υ₂)/2`.
    pub fn res_omega_w(&self, a: BranchId) -> Complex64 {
        let c = self.curve();
        let o0 = self.omega_at(a);
        let o2 = taylor2_at_ramification(c, &self.omega.coeffs, a);
        0.5 * (o0 * self.periods.w_diagonal_constant(a) + o2)
    }
}
