//! Named tolerances with defaults, `--tol key=val` overrides and the global
//! `TODAKIT_TOL_SCALE` multiplier.

use std::collections::BTreeMap;

use todakit_core::report::Report;

use crate::parse::{InputError, ParseResult};

/// Environment variable scaling every tolerance.
pub const SCALE_ENV: &str = "TODAKIT_TOL_SCALE";

/// `(key, default, meaning)`.
pub const DEFAULTS: [(&str, f64, &str); 14] = [
    ("quad", 1e-10, "quadrature convergence of periods"),
    ("drift", 1e-6, "b-period drift along a flow"),
    ("identity", 1e-8, "residue and rational identities"),
    ("variational", 1e-5, "relative finite-difference error of derivative formulas"),
    ("rational", 1e-8, "distance of measures from k/N"),
    ("measure_drift", 1e-6, "measure change along an isoequilibrium flow"),
    ("pell", 1e-8, "Pell residual on the support grid"),
    ("eom", 1e-6, "lattice equation residuals"),
    ("period", 1e-8, "periodicity of c_n and v_n"),
    ("division", 1e-7, "distance of N·U/(2πi) from the period lattice"),
    ("velocity", 1e-8, "|v_n| in the KdV case"),
    ("sum_rule", 1e-10, "sum of residue matrices"),
    ("constrained", 1e-6, "finite-difference residual of the constrained system"),
    ("double_zero", 1e-8, "|P² - 1| and its derivative at zeros of Q"),
];

/// Effective tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    values: BTreeMap<String, f64>,
    scale: f64,
}

impl Tolerances {
    /// Defaults, then overrides, all multiplied by `scale`.
    pub fn new(overrides: &[(String, f64)], scale: f64) -> ParseResult<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(InputError::new("tolerance scale", format!("must be positive, got {scale}")));
        }
        let mut values: BTreeMap<String, f64> = DEFAULTS.iter().map(|(k, v, _)| (k.to_string(), *v)).collect();
        for (k, v) in overrides {
            match values.get_mut(k) {
                Some(slot) => *slot = *v,
                None => return Err(InputError::new("tolerance", format!("unknown key {k:?}"))),
            }
        }
        Ok(Tolerances { values, scale })
    }

    /// Scale read from [`SCALE_ENV`] (1 when unset).
    pub fn env_scale() -> ParseResult<f64> {
        match std::env::var(SCALE_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| InputError::new("tolerance scale", format!("{SCALE_ENV}={s:?} is not a number"))),
            Err(_) => Ok(1.0),
        }
    }

    /// Scaled tolerance for a key.
    pub fn get(&self, key: &str) -> f64 {
        self.values.get(key).copied().expect("known tolerance key") * self.scale
    }

    /// The global multiplier.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// All scaled tolerances in key order.
    pub fn effective(&self) -> BTreeMap<String, f64> {
        self.values.iter().map(|(k, v)| (k.clone(), v * self.scale)).collect()
    }

    /// Rescales built-in report thresholds by the global multiplier.
    pub fn rescale(&self, report: Report) -> Report {
        let mut out = Report::default();
        for c in report.checks {
            out.push(c.name, c.value, c.tol * self.scale);
        }
        out
    }
}
