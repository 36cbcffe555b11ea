//! JSON encodings shared by artifacts: complex numbers as `[re, im]` pairs,
//! matrices row-major.

use num_complex::Complex64;
use serde_json::{json, Value};

/// `[re, im]`.
pub fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Vector of `[re, im]` pairs.
pub fn cvec(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&z| c(z)).collect())
}

/// Row-major matrix of `[re, im]` pairs.
pub fn cmat(m: &[Vec<Complex64>]) -> Value {
    Value::Array(m.iter().map(|r| cvec(r)).collect())
}

/// Decodes `[re, im]`.
pub fn parse_c(v: &Value) -> Option<Complex64> {
    let a = v.as_array()?;
    if a.len() != 2 {
        return None;
    }
    Some(Complex64::new(a[0].as_f64()?, a[1].as_f64()?))
}

/// Decodes a vector of `[re, im]` pairs.
pub fn parse_cvec(v: &Value) -> Option<Vec<Complex64>> {
    v.as_array()?.iter().map(parse_c).collect()
}

/// Decodes a row-major matrix of `[re, im]` pairs.
pub fn parse_cmat(v: &Value) -> Option<Vec<Vec<Complex64>>> {
    v.as_array()?.iter().map(parse_cvec).collect()
}
