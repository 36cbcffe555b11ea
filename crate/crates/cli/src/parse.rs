//! Parsers for every textual input of the command line.

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;
use todakit_core::{build_curve, CurveSpec};

/// Malformed user input.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{what}: {message}")]
pub struct InputError {
    pub what: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(what: &'static str, message: impl Into<String>) -> Self {
        InputError { what, message: message.into() }
    }
}

pub type ParseResult<T> = std::result::Result<T, InputError>;

/// A parsed curve file: a genuine curve or the genus-0 boundary case.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveInput {
    Curve(CurveSpec),
    /// `{"genus": 0, ...}`; `lambda` is the optional real scale of the
    /// single-interval support `[-√2Λ, √2Λ]`.
    Genus0 {
        lambda: f64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    genus: usize,
    #[serde(default)]
    x: Vec<f64>,
    #[serde(default)]
    u: Vec<f64>,
    #[serde(default)]
    lambda: Option<f64>,
}

/// Default `Λ` of the genus-0 case (classical `T₂` on `[-1, 1]`).
pub const DEFAULT_LAMBDA: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Parses `{"genus": g, "x": [...], "u": [...]}`; genus 0 is accepted with
/// empty `x`, `u` and an optional `"lambda"`.
pub fn parse_curve_input(text: &str) -> ParseResult<CurveInput> {
    let raw: RawCurve = serde_json::from_str(text).map_err(|e| InputError::new("curve JSON", e.to_string()))?;
    if raw.genus == 0 {
        if !raw.x.is_empty() || !raw.u.is_empty() {
            return Err(InputError::new("curve JSON", "genus 0 takes no branch points"));
        }
        let lambda = raw.lambda.unwrap_or(DEFAULT_LAMBDA);
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(InputError::new("curve JSON", format!("lambda must be positive, got {lambda}")));
        }
        return Ok(CurveInput::Genus0 { lambda });
    }
    if raw.lambda.is_some() {
        return Err(InputError::new("curve JSON", "lambda is only meaningful for genus 0"));
    }
    build_curve(raw.genus, &raw.x, &raw.u)
        .map(CurveInput::Curve)
        .map_err(|e| InputError::new("curve JSON", e.to_string()))
}

/// Parses a curve file that must have positive genus.
pub fn parse_curve_json(text: &str) -> ParseResult<CurveSpec> {
    match parse_curve_input(text)? {
        CurveInput::Curve(c) => Ok(c),
        CurveInput::Genus0 { .. } => Err(InputError::new("curve JSON", "genus must be at least 1 for this command")),
    }
}

fn parse_f64(what: &'static str, s: &str) -> ParseResult<f64> {
    let v: f64 = s.trim().parse().map_err(|_| InputError::new(what, format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(InputError::new(what, format!("not finite: {s:?}")));
    }
    Ok(v)
}

fn parse_point(what: &'static str, s: &str, genus: usize) -> ParseResult<Vec<f64>> {
    let v = s.split(',').map(|p| parse_f64(what, p)).collect::<ParseResult<Vec<f64>>>()?;
    if v.len() != genus {
        return Err(InputError::new(what, format!("point {s:?} has {} coordinates, genus is {genus}", v.len())));
    }
    Ok(v)
}

/// Piecewise-linear path in x-space with a nominal step.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub waypoints: Vec<Vec<f64>>,
    pub step: f64,
}

/// `"p0:p1:…:step"` where each `p` is a comma-separated point of `genus`
/// coordinates; at least two waypoints; `step > 0`.
pub fn parse_path_spec(s: &str, genus: usize) -> ParseResult<PathSpec> {
    const WHAT: &str = "path spec";
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() < 3 {
        return Err(InputError::new(WHAT, "expected start:end:step"));
    }
    let step = parse_f64(WHAT, parts[parts.len() - 1])?;
    if step <= 0.0 {
        return Err(InputError::new(WHAT, "step must be positive"));
    }
    let waypoints =
        parts[..parts.len() - 1].iter().map(|p| parse_point(WHAT, p, genus)).collect::<ParseResult<Vec<_>>>()?;
    Ok(PathSpec { waypoints, step })
}

/// One complex number: `a`, `bi`, `a+bi`, `a-bi` (`j` accepted for `i`).
pub fn parse_complex(s: &str) -> ParseResult<Complex64> {
    const WHAT: &str = "complex number";
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(InputError::new(WHAT, "empty"));
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(Complex64::new(parse_f64(WHAT, &t)?, 0.0));
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_f64(WHAT, &body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_f64(WHAT, other)?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated list of `genus` complex numbers.
pub fn parse_alpha(s: &str, genus: usize) -> ParseResult<Vec<Complex64>> {
    let v = s.split(',').map(parse_complex).collect::<ParseResult<Vec<_>>>()?;
    if v.len() != genus {
        return Err(InputError::new("alpha", format!("{} entries, genus is {genus}", v.len())));
    }
    Ok(v)
}

/// Comma-separated list of positive integers.
pub fn parse_k_list(s: &str) -> ParseResult<Vec<usize>> {
    s.split(',')
        .map(|p| {
            let k: usize = p.trim().parse().map_err(|_| InputError::new("k list", format!("not a count: {p:?}")))?;
            if k == 0 {
                return Err(InputError::new("k list", "entries must be positive"));
            }
            Ok(k)
        })
        .collect()
}

/// `key=value` with a positive finite value.
pub fn parse_tol(s: &str) -> ParseResult<(String, f64)> {
    const WHAT: &str = "tolerance";
    let (k, v) = s.split_once('=').ok_or_else(|| InputError::new(WHAT, format!("expected key=value, got {s:?}")))?;
    let key = k.trim();
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(InputError::new(WHAT, format!("bad key {k:?}")));
    }
    let val = parse_f64(WHAT, v)?;
    if val <= 0.0 {
        return Err(InputError::new(WHAT, format!("{key} must be positive")));
    }
    Ok((key.to_string(), val))
}

/// Largest number of lattice sites or time samples a range may produce.
pub const MAX_RANGE_LEN: usize = 100_000;

/// Inclusive integer range `"lo:hi"` (or a single integer).
pub fn parse_n_range(s: &str) -> ParseResult<(i64, i64)> {
    const WHAT: &str = "n range";
    let int = |p: &str| p.trim().parse::<i64>().map_err(|_| InputError::new(WHAT, format!("not an integer: {p:?}")));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (int(a)?, int(b)?),
        None => {
            let v = int(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(InputError::new(WHAT, "lower end exceeds upper end"));
    }
    if (hi as i128 - lo as i128) >= MAX_RANGE_LEN as i128 {
        return Err(InputError::new(WHAT, format!("more than {MAX_RANGE_LEN} sites")));
    }
    Ok((lo, hi))
}

/// Time samples `"a:b:step"` (inclusive of `b` up to rounding) or a single
/// time `"a"`.
pub fn parse_t_range(s: &str) -> ParseResult<Vec<f64>> {
    const WHAT: &str = "t range";
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a] => Ok(vec![parse_f64(WHAT, a)?]),
        [a, b, h] => {
            let (a, b, h) = (parse_f64(WHAT, a)?, parse_f64(WHAT, b)?, parse_f64(WHAT, h)?);
            if h <= 0.0 {
                return Err(InputError::new(WHAT, "step must be positive"));
            }
            if b < a {
                return Err(InputError::new(WHAT, "end precedes start"));
            }
            let count = ((b - a) / h + 1e-9).floor();
            if !(count < MAX_RANGE_LEN as f64) {
                return Err(InputError::new(WHAT, format!("more than {MAX_RANGE_LEN} samples")));
            }
            let ts: Vec<f64> = (0..=count as usize).map(|i| a + i as f64 * h).collect();
            if ts.windows(2).any(|w| w[1] <= w[0]) {
                return Err(InputError::new(WHAT, "step is below the resolution of the times"));
            }
            Ok(ts)
        }
        _ => Err(InputError::new(WHAT, "expected a or a:b:step")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_and_genus0() {
        let c = parse_curve_json(r#"{"genus":1,"x":[2],"u":[3]}"#).unwrap();
        assert_eq!(c.u(), &[3.0]);
        assert!(matches!(parse_curve_input(r#"{"genus":0}"#), Ok(CurveInput::Genus0 { .. })));
        assert!(parse_curve_json(r#"{"genus":0}"#).is_err());
        assert!(parse_curve_json(r#"{"genus":1,"x":[3],"u":[2]}"#).is_err());
        assert!(parse_curve_json(r#"{"genus":1,"x":[2],"u":[3],"extra":1}"#).is_err());
    }

    #[test]
    fn path_specs() {
        let p = parse_path_spec("2:2.5:0.01", 1).unwrap();
        assert_eq!(p.waypoints, vec![vec![2.0], vec![2.5]]);
        assert_eq!(p.step, 0.01);
        let q = parse_path_spec("1.8,3.9:1.9,3.9:1.9,4:0.02", 2).unwrap();
        assert_eq!(q.waypoints.len(), 3);
        for bad in ["2:2.5", "2:2.5:0", "2,1:2.5:0.1", "a:b:c", "2:2.5:-1"] {
            assert!(parse_path_spec(bad, 1).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_and_alpha() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("1-2i").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1j").unwrap(), Complex64::new(1e-3, 20.0));
        assert_eq!(parse_alpha("0,0", 2).unwrap().len(), 2);
        assert!(parse_alpha("0", 2).is_err());
        assert!(parse_complex("1+").is_err());
    }

    #[test]
    fn k_tol_ranges() {
        assert_eq!(parse_k_list("1, 2").unwrap(), vec![1, 2]);
        assert!(parse_k_list("0").is_err());
        assert_eq!(parse_tol("drift=1e-7").unwrap(), ("drift".to_string(), 1e-7));
        assert!(parse_tol("drift=-1").is_err());
        assert!(parse_tol("=1").is_err());
        assert_eq!(parse_n_range("-4:4").unwrap(), (-4, 4));
        assert!(parse_n_range("4:-4").is_err());
        assert_eq!(parse_t_range("0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_t_range("0.5").unwrap(), vec![0.5]);
        assert!(parse_t_range("0:1e9:1e-9").is_err());
    }
}
