//! Dense univariate polynomials in ascending-coefficient form.
//!
//! Real polynomials are `&[f64]`, complex ones `&[Complex64]`; index `i`
//! holds the coefficient of `u^i`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Evaluates a real polynomial at a real point (Horner).
pub fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Evaluates a complex-coefficient polynomial at a real point.
pub fn eval_c(p: &[Complex64], x: f64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Derivative of a real polynomial.
pub fn derivative(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    p.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
}

/// Derivative of a complex polynomial.
pub fn derivative_c(p: &[Complex64]) -> Vec<Complex64> {
    if p.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    p.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
}

/// Product of two real polynomials.
pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![0.0];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sum of two real polynomials.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0)).collect()
}

/// Difference `a - b` of two real polynomials.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).collect()
}

/// Scalar multiple of a real polynomial.
pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|&c| c * s).collect()
}

/// Monic polynomial with the given real roots.
pub fn from_roots(roots: &[f64]) -> Vec<f64> {
    roots.iter().fold(vec![1.0], |acc, &r| mul(&acc, &[-r, 1.0]))
}

/// Drops trailing coefficients whose magnitude is at most `tol`.
pub fn trim(p: &[f64], tol: f64) -> Vec<f64> {
    let mut v = p.to_vec();
    while v.len() > 1 && v.last().is_some_and(|c| c.abs() <= tol) {
        v.pop();
    }
    v
}

/// Long division `a = q·b + r`; returns `(q, r)` with `deg r < deg b`.
pub fn divrem(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let b = trim(b, 0.0);
    let db = b.len() - 1;
    let lead = b[db];
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![0.0], r);
    }
    let dq = r.len() - 1 - db;
    let mut q = vec![0.0; dq + 1];
    for k in (0..=dq).rev() {
        let c = r[k + db] / lead;
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
    }
    r.truncate(db.max(1));
    (q, r)
}

/// Synthetic division of a complex polynomial by `(u - a)`, discarding the remainder.
pub fn deflate_c(p: &[Complex64], a: f64) -> Vec<Complex64> {
    let n = p.len();
    if n <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    let mut q = vec![Complex64::new(0.0, 0.0); n - 1];
    let mut carry = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        carry = carry * a + p[k];
        q[k - 1] = carry;
    }
    q
}

/// Synthetic division of a real polynomial by `(u - a)`, discarding the remainder.
pub fn deflate(p: &[f64], a: f64) -> Vec<f64> {
    let n = p.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut q = vec![0.0; n - 1];
    let mut carry = 0.0;
    for k in (1..n).rev() {
        carry = carry * a + p[k];
        q[k - 1] = carry;
    }
    q
}

/// Substitutes `u = a + b·w`, returning the coefficients in `w`.
pub fn compose_affine(p: &[f64], a: f64, b: f64) -> Vec<f64> {
    let lin = [a, b];
    let mut out = p.iter().rev().fold(vec![0.0], |acc, &c| add(&mul(&acc, &lin), &[c]));
    out.truncate(p.len().max(1));
    out
}

/// Interpolates values at the Chebyshev points of the first kind on `[lo, hi]`.
///
/// `values[k]` is the sample at `chebyshev_nodes(n, lo, hi)[k]`; the result is
/// the degree `n - 1` interpolant in the monomial basis of `u`.
pub fn chebyshev_interpolate(values: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let n = values.len();
    let theta: Vec<f64> = (0..n).map(|k| std::f64::consts::PI * (k as f64 + 0.5) / n as f64).collect();
    // Chebyshev coefficients by the discrete cosine transform.
    let cheb: Vec<f64> = (0..n)
        .map(|j| {
            let s: f64 = values.iter().zip(&theta).map(|(&f, &t)| f * (j as f64 * t).cos()).sum();
            let w = if j == 0 { 1.0 } else { 2.0 };
            w * s / n as f64
        })
        .collect();
    // Clenshaw-free conversion: accumulate T_j(s) in the monomial basis of s.
    let mut t_prev = vec![1.0];
    let mut t_cur = vec![0.0, 1.0];
    let mut in_s = scale(&t_prev, cheb[0]);
    if n > 1 {
        in_s = add(&in_s, &scale(&t_cur, cheb[1]));
    }
    for &c in cheb.iter().skip(2) {
        let t_next = sub(&mul(&[0.0, 2.0], &t_cur), &t_prev);
        in_s = add(&in_s, &scale(&t_next, c));
        t_prev = t_cur;
        t_cur = t_next;
    }
    // s = (2u - lo - hi)/(hi - lo).
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    compose_affine(&in_s, -mid / half, 1.0 / half)
}

/// Chebyshev points of the first kind on `[lo, hi]`, in the order used by
/// [`chebyshev_interpolate`].
pub fn chebyshev_nodes(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let t = std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
            0.5 * (hi + lo) + 0.5 * (hi - lo) * t.cos()
        })
        .collect()
}

/// Square root of a polynomial of even degree with positive leading coefficient.
///
/// The top half of the coefficients fixes the root by the Newton recurrence
/// for power series in `1/u`; the returned residue is the largest remaining
/// mismatch relative to the largest coefficient of `s`.
pub fn sqrt_poly(s: &[f64]) -> Result<(Vec<f64>, f64)> {
    let s = trim(s, 0.0);
    let deg = s.len() - 1;
    if !deg.is_multiple_of(2) || s[deg] <= 0.0 {
        return Err(Error::NotPerfectSquare(f64::INFINITY));
    }
    let d = deg / 2;
    let mut q = vec![0.0; d + 1];
    q[d] = s[deg].sqrt();
    for k in 1..=d {
        // Coefficient of u^{2d-k} in q^2 must equal s[2d-k].
        let mut acc = 0.0;
        for i in 1..k {
            acc += q[d - i] * q[d - k + i];
        }
        q[d - k] = (s[deg - k] - acc) / (2.0 * q[d]);
    }
    let sq = mul(&q, &q);
    let norm = s.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    let residue = sub(&sq, &s).iter().fold(0.0f64, |m, c| m.max(c.abs())) / norm;
    Ok((q, residue))
}

/// Number of distinct real roots of `p` in the open interval `(a, b)` from a Sturm sequence.
pub fn sturm_count(p: &[f64], a: f64, b: f64) -> usize {
    let p = trim(p, 0.0);
    if p.len() <= 1 {
        return 0;
    }
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let d = derivative(&p);
    let mut seq = vec![scale(&p, 1.0 / max_abs(&p)), scale(&d, 1.0 / max_abs(&d))];
    while seq.last().is_some_and(|s| s.len() > 1) {
        let n = seq.len();
        let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
        let r = scale(&r, -1.0);
        let rn = max_abs(&r);
        if rn <= 1e-10 {
            break;
        }
        seq.push(trim(&scale(&r, 1.0 / rn), 1e-13));
    }
    let changes = |x: f64| {
        let mut last = 0.0f64;
        let mut count = 0usize;
        for s in &seq {
            let v = eval(s, x);
            if v != 0.0 {
                if last != 0.0 && (v > 0.0) != (last > 0.0) {
                    count += 1;
                }
                last = v;
            }
        }
        count
    };
    let eps = 1e-12 * (1.0 + a.abs().max(b.abs()));
    let ca = changes(a + eps);
    let cb = changes(b - eps);
    ca.saturating_sub(cb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_recovers_factor() {
        let a = mul(&from_roots(&[1.0, 2.0, 3.0]), &[5.0, 1.0]);
        let (q, r) = divrem(&a, &from_roots(&[1.0, 2.0, 3.0]));
        assert!((q[0] - 5.0).abs() < 1e-12 && (q[1] - 1.0).abs() < 1e-12);
        assert!(r.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn chebyshev_interpolation_is_exact_on_polynomials() {
        let p = [17.0, 0.0, -96.0, 0.0, 128.0];
        let nodes = chebyshev_nodes(5, -0.8, 0.8);
        let vals: Vec<f64> = nodes.iter().map(|&x| eval(&p, x)).collect();
        let q = chebyshev_interpolate(&vals, -0.8, 0.8);
        for (a, b) in p.iter().zip(&q) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn sqrt_of_square() {
        let q = [3.0, -2.0, 0.5];
        let (r, res) = sqrt_poly(&mul(&q, &q)).unwrap();
        assert!(res < 1e-14);
        for (a, b) in q.iter().zip(&r) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sturm_counts_roots() {
        let p = from_roots(&[0.5, 1.5, 2.5]);
        assert_eq!(sturm_count(&p, 0.0, 3.0), 3);
        assert_eq!(sturm_count(&p, 1.0, 2.0), 1);
        assert_eq!(sturm_count(&p, 1.6, 2.4), 0);
        assert_eq!(sturm_count(&[-3.0, 2.0], 2.0, 3.0), 0);
    }

    #[test]
    fn affine_composition() {
        let p = [1.0, -3.0, 1.0];
        let q = compose_affine(&p, 1.0, 2.0);
        for w in [-1.0, 0.3, 2.0] {
            assert!((eval(&q, w) - eval(&p, 1.0 + 2.0 * w)).abs() < 1e-12);
        }
    }
}
