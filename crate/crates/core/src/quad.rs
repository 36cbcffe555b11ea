//! Fixed quadrature rules and the node-doubling ladder.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Smallest node count of the doubling ladder.
pub const LADDER_START: usize = 32;
/// Largest node count of the doubling ladder.
pub const LADDER_CAP: usize = 4096;

/// Node counts visited by the doubling ladder, `32, 64, …, 4096`.
pub fn ladder() -> impl Iterator<Item = usize> {
    std::iter::successors(Some(LADDER_START), |&n| (n < LADDER_CAP).then_some(n * 2))
}

/// Angles `θ_k = (2k-1)π/(2n)` of the `n`-point Gauss–Chebyshev rule.
///
/// With `u = m + h·cosθ`, `∫ f(u)/√((u-lo)(hi-u)) du ≈ (π/n)·Σ f(u(θ_k))`.
pub fn chebyshev_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| PI * (2 * k + 1) as f64 / (2 * n) as f64).collect()
}

type Rule = (Vec<f64>, Vec<f64>);

fn legendre_cache() -> &'static Mutex<BTreeMap<usize, &'static Rule>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, &'static Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
///
/// Nodes are Newton-refined roots of `P_n`; rules are computed once per size
/// and cached for the lifetime of the process.
pub fn gauss_legendre_unit(n: usize) -> &'static Rule {
    let mut cache = legendre_cache().lock().expect("quadrature cache poisoned");
    if let Some(rule) = cache.get(&n) {
        return rule;
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    let rule: &'static Rule = Box::leak(Box::new((nodes, weights)));
    cache.insert(n, rule);
    rule
}
