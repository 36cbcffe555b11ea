//! Real hyperelliptic curves `v² = Δ(u) = u(u-1)∏(u-x_j)(u-u_j)`.
//!
//! Branch points are ordered `0 < 1 < x₁ < u₁ < … < x_g < u_g`. The `+`
//! sheet is fixed by `v ≃ +u^{g+1}` at `∞⁺`: along the real axis
//! `v(u) = i^{n(u)}·√|Δ(u)|`, where `n(u)` counts branch points above `u`.
//! Square roots of negative reals use the principal branch `√(-r) = i√r`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly;

/// Minimum separation between adjacent branch points.
pub const DEGENERACY_FLOOR: f64 = 1e-9;

/// A validated real hyperelliptic curve of genus `g ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSpec {
    genus: usize,
    x: Vec<f64>,
    u: Vec<f64>,
}

/// Names one element of the branch set `{0, 1, x₁, u₁, …, x_g, u_g}`.
///
/// Indices of `X` and `U` are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchId {
    Zero,
    One,
    X(usize),
    U(usize),
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchId::Zero => write!(f, "0"),
            BranchId::One => write!(f, "1"),
            BranchId::X(i) => write!(f, "x{i}"),
            BranchId::U(i) => write!(f, "u{i}"),
        }
    }
}

impl FromStr for BranchId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown branch id {s:?}"));
        match s {
            "0" => Ok(BranchId::Zero),
            "1" => Ok(BranchId::One),
            _ => {
                let (tag, rest) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
                let idx: usize = rest.parse().map_err(|_| bad())?;
                if idx == 0 {
                    return Err(bad());
                }
                match tag {
                    "x" => Ok(BranchId::X(idx)),
                    "u" => Ok(BranchId::U(idx)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Serialize for BranchId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BranchId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Deserialize)]
struct CurveJson {
    genus: usize,
    x: Vec<f64>,
    u: Vec<f64>,
}

impl<'de> Deserialize<'de> for CurveSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CurveJson::deserialize(d)?;
        build_curve(raw.genus, &raw.x, &raw.u).map_err(serde::de::Error::custom)
    }
}

/// Validates and builds a curve from its independent and dependent branch points.
pub fn build_curve(genus: usize, x: &[f64], u: &[f64]) -> Result<CurveSpec> {
    if x.len() != genus {
        return Err(Error::DimensionMismatch { expected: genus, got: x.len() });
    }
    if u.len() != genus {
        return Err(Error::DimensionMismatch { expected: genus, got: u.len() });
    }
    if genus == 0 {
        return Err(Error::InvalidInput("genus must be at least 1".into()));
    }
    if let Some(bad) = x.iter().chain(u).find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite branch point {bad}")));
    }
    let curve = CurveSpec { genus, x: x.to_vec(), u: u.to_vec() };
    let pts = curve.branch_points();
    for w in pts.windows(2) {
        if w[1] - w[0] < DEGENERACY_FLOOR {
            return Err(Error::OrderingViolation(format!(
                "branch points {} and {} are not strictly increasing beyond {DEGENERACY_FLOOR:e}",
                w[0], w[1]
            )));
        }
    }
    Ok(curve)
}

impl CurveSpec {
    /// Parses the canonical `{"genus", "x", "u"}` JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CurveJson = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        build_curve(raw.genus, &raw.x, &raw.u)
    }

    /// Genus `g`.
    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Independent branch points `x₁ … x_g`.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Dependent branch points `u₁ … u_g`.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// All `2g+2` branch points in increasing order.
    pub fn branch_points(&self) -> Vec<f64> {
        let mut pts = vec![0.0, 1.0];
        for (x, u) in self.x.iter().zip(&self.u) {
            pts.push(*x);
            pts.push(*u);
        }
        pts
    }

    /// All branch ids in increasing order of position.
    pub fn branch_ids(&self) -> Vec<BranchId> {
        let mut ids = vec![BranchId::Zero, BranchId::One];
        for i in 1..=self.genus {
            ids.push(BranchId::X(i));
            ids.push(BranchId::U(i));
        }
        ids
    }

    /// Position of a branch point.
    ///
    /// # Panics
    /// If the index of `X`/`U` lies outside `1..=g`.
    pub fn value(&self, a: BranchId) -> f64 {
        match a {
            BranchId::Zero => 0.0,
            BranchId::One => 1.0,
            BranchId::X(i) => self.x[i - 1],
            BranchId::U(i) => self.u[i - 1],
        }
    }

    /// Checks that a branch id refers to this curve.
    pub fn check_id(&self, a: BranchId) -> Result<()> {
        match a {
            BranchId::X(i) | BranchId::U(i) if i == 0 || i > self.genus => {
                Err(Error::InvalidInput(format!("branch id {a} out of range for genus {}", self.genus)))
            }
            _ => Ok(()),
        }
    }

    /// Bands `[0,1], [x₁,u₁], …, [x_g,u_g]`.
    pub fn bands(&self) -> Vec<(f64, f64)> {
        let mut b = vec![(0.0, 1.0)];
        b.extend(self.x.iter().zip(&self.u).map(|(&x, &u)| (x, u)));
        b
    }

    /// Gaps `[u_{j-1}, x_j]` with `u₀ = 1`.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        (0..self.genus).map(|j| (if j == 0 { 1.0 } else { self.u[j - 1] }, self.x[j])).collect()
    }

    /// Monic coefficients of `Δ`, ascending.
    pub fn delta_poly(&self) -> Vec<f64> {
        poly::from_roots(&self.branch_points())
    }

    /// `Δ(point)` as a product of linear factors.
    pub fn delta_eval(&self, point: f64) -> f64 {
        self.branch_points().iter().map(|a| point - a).product()
    }

    /// `∏_{i≠j}(a_j - a_i) = Δ'(a_j)`.
    pub fn branch_product(&self, a: BranchId) -> f64 {
        let aj = self.value(a);
        self.branch_points().iter().filter(|&&ai| ai != aj).map(|ai| aj - ai).product()
    }

    /// Number of branch points strictly above `point`.
    pub fn count_above(&self, point: f64) -> usize {
        self.branch_points().iter().filter(|&&a| a > point).count()
    }

    /// `v(point)` on the `+` sheet along the real axis.
    pub fn sqrt_delta_signed(&self, point: f64) -> Result<Complex64> {
        let d = self.delta_eval(point);
        if d.abs() < DEGENERACY_FLOOR {
            return Err(Error::BranchPointHit(point));
        }
        Ok(i_pow(self.count_above(point)) * d.abs().sqrt())
    }

    /// Principal square root of `∏_{i≠j}(a_j - a_i)`; the constant `R(0)` in
    /// `v = ζ·R(ζ²)` for the local parameter `ζ = √(u - a_j)`.
    pub fn local_sqrt(&self, a: BranchId) -> Complex64 {
        Complex64::new(self.branch_product(a), 0.0).sqrt()
    }

    /// `φ(P_{a_j}) = 2/√(∏_{i≠j}(a_j - a_i))` for `φ = du/v`.
    pub fn phi_at_ramification(&self, a: BranchId) -> Complex64 {
        2.0 / self.local_sqrt(a)
    }

    /// `v_k(P_{a_j})` for the basis normalised by `v_k(P_{u_m}) = δ_{km}`.
    ///
    /// The ratio `φ(P_{a_j})/φ(P_{u_k})` is evaluated as the principal root of
    /// `Δ'(u_k)/Δ'(a_j)`; it can differ in sign from the quotient of the two
    /// separately evaluated values.
    pub fn v_basis_at_ramification(&self, k: usize, a: BranchId) -> Complex64 {
        let aj = self.value(a);
        let uk = self.u[k - 1];
        let mut num = 1.0;
        let mut den = 1.0;
        for (b, &ub) in self.u.iter().enumerate() {
            if b + 1 != k {
                num *= aj - ub;
                den *= uk - ub;
            }
        }
        if let BranchId::U(m) = a {
            if m == k {
                return Complex64::new(1.0, 0.0);
            }
        }
        // φ(P_a)/φ(P_{u_k}) taken as one principal root of Δ'(u_k)/Δ'(a).
        let ratio = Complex64::new(self.branch_product(BranchId::U(k)) / self.branch_product(a), 0.0).sqrt();
        ratio * (num / den)
    }

    /// Same curve with one branch point moved (no validation of ordering beyond `build_curve`).
    pub fn with_branch(&self, a: BranchId, value: f64) -> Result<CurveSpec> {
        let mut x = self.x.clone();
        let mut u = self.u.clone();
        match a {
            BranchId::X(i) => x[i - 1] = value,
            BranchId::U(i) => u[i - 1] = value,
            _ => return Err(Error::InvalidInput("0 and 1 are fixed branch points".into())),
        }
        build_curve(self.genus, &x, &u)
    }
}

/// `i^n`.
pub fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}
