use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use todakit_core::curve::{build_curve, CurveSpec};
use todakit_core::periods::Periods;
use todakit_core::theta::*;
use todakit_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn g1() -> CurveSpec {
    build_curve(1, &[2.0], &[3.0]).unwrap()
}

fn g2() -> CurveSpec {
    build_curve(2, &[1.8, 3.9], &[2.6, 5.2]).unwrap()
}

/// z-support `[-√½,-½] ∪ [½,√½]` moved affinely so the first band is `[0,1]`.
fn quartic() -> CurveSpec {
    let r = 0.5f64.sqrt();
    let len = r - 0.5;
    build_curve(1, &[(0.5 + r) / len], &[2.0 * r / len]).unwrap()
}

/// z-support `[-3,-2] ∪ [-1,1] ∪ [2,3]` moved to `[0,1] ∪ [2,4] ∪ [5,6]`.
fn symmetric_genus2() -> CurveSpec {
    build_curve(2, &[2.0, 5.0], &[4.0, 6.0]).unwrap()
}

fn theta_of(curve: &CurveSpec) -> ThetaParams {
    ThetaParams::for_periods(&Periods::compute(curve, 1e-12).unwrap()).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn theta_periodicity_evenness_quasi_periodicity() {
    for curve in [g1(), g2()] {
        let th = theta_of(&curve);
        let g = curve.genus();
        let b = th.riemann.clone();
        let z: Vec<Complex64> = (0..g).map(|i| c(0.13 + 0.07 * i as f64, 0.05 - 0.02 * i as f64)).collect();
        let t0 = riemann_theta(&z, &th);
        let neg: Vec<Complex64> = z.iter().map(|w| -w).collect();
        assert!(rel(riemann_theta(&neg, &th), t0) < 1e-10);
        for k in 0..g {
            let mut zp = z.clone();
            zp[k] += 1.0;
            assert!(rel(riemann_theta(&zp, &th), t0) < 1e-10);
            let zq: Vec<Complex64> = (0..g).map(|i| z[i] + b[i][k]).collect();
            let factor = (c(0.0, -std::f64::consts::PI) * b[k][k] - c(0.0, 2.0 * std::f64::consts::PI) * z[k]).exp();
            assert!(rel(riemann_theta(&zq, &th), factor * t0) < 1e-10);
        }
    }
}

#[test]
fn tail_bound_radius_is_stable_under_doubling() {
    for curve in [g1(), g2(), quartic()] {
        let th = theta_of(&curve);
        let wide = ThetaParams::with_radius(&th.riemann, 2 * th.radius).unwrap();
        let z: Vec<Complex64> = (0..curve.genus()).map(|i| c(0.21 - 0.1 * i as f64, 0.03)).collect();
        let a = riemann_theta(&z, &th);
        let b = riemann_theta(&z, &wide);
        assert!(rel(a, b) < 1e-12, "{}", rel(a, b));
    }
    assert_eq!(theta_of(&g1()).radius, 4);
}

#[test]
fn velocity_is_the_time_derivative_of_the_log_ratio() {
    let (p, th) = synthesize(&g2(), LatticeFlow::Toda, None, 1e-12).unwrap();
    let h = 1e-5;
    for n in -2..=2 {
        let log_ratio = |t: f64| {
            let z = |m: i64| -> Vec<Complex64> {
                (0..2)
                    .map(|i| (p.u[i] * m as f64 + p.v[i] * t) / c(0.0, 2.0 * std::f64::consts::PI) + p.z0[i])
                    .collect()
            };
            (riemann_theta(&z(n + 1), &th) / riemann_theta(&z(n), &th)).ln()
        };
        let fd = (log_ratio(0.4 + h) - log_ratio(0.4 - h)) / (2.0 * h);
        let (v, _) = toda_solution(&p, &th, n, 0.4).unwrap();
        assert!((fd - v).norm() < 1e-7, "{fd} vs {v}");
    }
}

#[test]
fn g1_toda_solution_is_two_periodic_and_solves_the_lattice() {
    let (p, th) = synthesize(&g1(), LatticeFlow::Toda, None, 1e-12).unwrap();
    assert!((p.v_scale - 2f64.sqrt()).abs() < 1e-8, "{}", p.v_scale);
    let per = periodicity_check(&p, &th, 2, (-3, 3), &[0.0, 0.5]).unwrap();
    assert!(per.c_max < PERIOD_TOL && per.v_max < PERIOD_TOL, "{per:?}");
    assert!(per.division.residual < DIVISION_TOL);
    assert_eq!(per.division.nm1, vec![1]);
    assert_eq!(per.division.nm2, vec![0]);
    let rep = lattice_report(&p, &th, LatticeFlow::Toda, Some(2), (-3, 3), &[0.0, 0.35, 1.1], EOM_TOL).unwrap();
    assert!(rep.all_pass(), "{:?}", rep.checks);
}

#[test]
fn g1_is_not_three_periodic() {
    let (p, th) = synthesize(&g1(), LatticeFlow::Toda, None, 1e-12).unwrap();
    let per = periodicity_check(&p, &th, 3, (-3, 3), &[0.0]).unwrap();
    assert!(per.c_max > 1e-2, "{per:?}");
    assert!(per.division.residual > 0.1);
}

#[test]
fn flipped_time_is_also_a_solution() {
    let (mut p, th) = synthesize(&g1(), LatticeFlow::Toda, None, 1e-12).unwrap();
    p.v.iter_mut().for_each(|z| *z = -*z);
    p.w.iter_mut().for_each(|z| *z = -*z);
    let r = lattice_residual(&p, &th, (-2, 2), 0.3, DEFAULT_TIME_STEP).unwrap();
    assert!(r.toda_v < EOM_TOL && r.toda_c < EOM_TOL, "{r:?}");
}

#[test]
fn uncalibrated_vector_fails_the_velocity_equation() {
    let (mut p, th) = synthesize(&g2(), LatticeFlow::Toda, None, 1e-12).unwrap();
    let s = p.v_scale;
    p.v.iter_mut().for_each(|z| *z /= s);
    p.w.iter_mut().for_each(|z| *z /= s);
    let r = lattice_residual(&p, &th, (-2, 2), 0.3, DEFAULT_TIME_STEP).unwrap();
    assert!(r.toda_v > 1e-2, "{r:?}");
    assert!(r.toda_c < EOM_TOL, "{r:?}");
}

#[test]
fn random_curves_solve_the_toda_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for g in 1..=3 {
        for _ in 0..2 {
            let mut x = Vec::new();
            let mut u = Vec::new();
            let mut q = 1.0;
            for _ in 0..g {
                q += rng.gen_range(0.4..1.2);
                x.push(q);
                q += rng.gen_range(0.4..1.2);
                u.push(q);
            }
            let curve = build_curve(g, &x, &u).unwrap();
            let (p, th) = synthesize(&curve, LatticeFlow::Toda, None, 1e-12).unwrap();
            let t = rng.gen_range(-1.0..1.0);
            let rep = lattice_report(&p, &th, LatticeFlow::Toda, None, (-3, 3), &[t], EOM_TOL).unwrap();
            assert!(rep.all_pass(), "g={g} x={x:?} u={u:?}: {:?}", rep.checks);
        }
    }
}

#[test]
fn quartic_kdv_case() {
    let (p, th) = synthesize(&quartic(), LatticeFlow::Kdv, None, 1e-12).unwrap();
    let rep = lattice_report(&p, &th, LatticeFlow::Kdv, Some(4), (-3, 3), &[0.0, 0.5], EOM_TOL).unwrap();
    assert!(rep.all_pass(), "{:?}", rep.checks);
    let div = division_point(&p, &th, 2);
    assert!(div.residual < DIVISION_TOL);
}

#[test]
fn symmetric_genus2_kdv_is_nonstationary() {
    let (p, th) = synthesize(&symmetric_genus2(), LatticeFlow::Kdv, None, 1e-12).unwrap();
    let rep = lattice_report(&p, &th, LatticeFlow::Kdv, Some(3), (-3, 3), &[0.0, 0.4, 1.2], EOM_TOL).unwrap();
    assert!(rep.all_pass(), "{:?}", rep.checks);
    let (_, a) = toda_solution(&p, &th, 1, 0.0).unwrap();
    let (_, b) = toda_solution(&p, &th, 1, 0.5).unwrap();
    assert!((a - b).norm() > 1e-2, "{a} {b}");
}

#[test]
fn kdv_requires_a_symmetric_support() {
    let e = synthesize(&g2(), LatticeFlow::Kdv, None, 1e-12).unwrap_err();
    assert!(matches!(e, Error::InvalidInput(_)), "{e}");
}

#[test]
fn phase_on_the_theta_divisor_is_reported() {
    let curve = g1();
    let periods = Periods::compute(&curve, 1e-12).unwrap();
    let b = periods.data().riemann[0][0];
    // θ vanishes at ½ + 𝔹/2; at n = 0, t = 0 the argument is z0.
    let z0 = vec![0.5 + 0.5 * b];
    let p = toda_wave_vectors(&periods, LatticeFlow::Toda, Some(z0)).unwrap();
    let th = ThetaParams::for_periods(&periods).unwrap();
    let e = toda_solution(&p, &th, 0, 0.0).unwrap_err();
    assert!(matches!(e, Error::ThetaDivisorHit(_)), "{e}");
}
