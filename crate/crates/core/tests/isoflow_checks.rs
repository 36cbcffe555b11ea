use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use todakit_core::curve::{build_curve, CurveSpec};
use todakit_core::frame::Frame;
use todakit_core::isoflow::{
    first_order_rhs_for, first_order_rhs_frame, integrate_flow, newton_period_corrector_with, second_order_rhs,
    validate_identities, FlowOptions, FlowState, NewtonOptions,
};

fn random_curve(rng: &mut ChaCha8Rng, g: usize) -> CurveSpec {
    let mut x = Vec::new();
    let mut u = Vec::new();
    let mut p = 1.0;
    for _ in 0..g {
        p += rng.gen_range(0.3..1.2);
        x.push(p);
        p += rng.gen_range(0.3..1.2);
        u.push(p);
    }
    build_curve(g, &x, &u).unwrap()
}

fn zero(g: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); g]
}

fn tight() -> NewtonOptions {
    NewtonOptions { quad_tol: 1e-13, ..NewtonOptions::default() }
}

#[test]
fn residue_identities_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for g in 1..=3 {
        for _ in 0..3 {
            let c = random_curve(&mut rng, g);
            let alpha: Vec<Complex64> = (0..g).map(|_| Complex64::new(rng.gen_range(-0.5..0.5), 0.0)).collect();
            let r = validate_identities(&c, &alpha).unwrap();
            assert!(r.all_pass(), "g={g}: {:?}", r.checks);
        }
    }
}

/// Finite difference of the first-order flow along the isoperiodic family
/// against the rational second-order system.
fn second_order_fd_error(c: &CurveSpec, h: f64) -> f64 {
    let g = c.genus();
    let frame = Frame::new(c, &zero(g), 1e-13).unwrap();
    let target = frame.b_periods();
    let du = first_order_rhs_frame(&frame).unwrap();
    let dur: Vec<Vec<f64>> = du.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let s = second_order_rhs(c.x(), c.u(), &dur).unwrap();
    let mut err = 0.0f64;
    for n in 0..g {
        let mut jac = Vec::new();
        for sign in [1.0, -1.0] {
            let mut x = c.x().to_vec();
            x[n] += sign * h;
            let u = newton_period_corrector_with(c, &zero(g), &target, &x, &tight()).unwrap();
            let cc = build_curve(g, &x, &u).unwrap();
            let f = Frame::new(&cc, &zero(g), 1e-13).unwrap();
            jac.push(first_order_rhs_for(&cc, f.omega()).unwrap());
        }
        for m in 0..g {
            for k in 0..g {
                let fd = (jac[0][m][k].re - jac[1][m][k].re) / (2.0 * h);
                err = err.max((fd - s.hessian[m][k][n]).abs());
            }
        }
    }
    err
}

#[test]
fn second_order_system_matches_finite_differences_g1() {
    let c = build_curve(1, &[2.3], &[3.1]).unwrap();
    let e = second_order_fd_error(&c, 1e-4);
    assert!(e < 1e-6, "{e}");
}

#[test]
fn second_order_system_matches_finite_differences_g2() {
    let c = build_curve(2, &[1.8, 3.9], &[2.6, 5.2]).unwrap();
    let e = second_order_fd_error(&c, 1e-4);
    assert!(e < 1e-6, "{e}");
}

#[test]
fn g1_flow_reaches_closed_form() {
    let c = build_curve(1, &[2.0], &[3.0]).unwrap();
    let st = FlowState::new(&c, &zero(1)).unwrap();
    let t = integrate_flow(&st, &[vec![2.0], vec![2.5]], &FlowOptions::with_step(0.01)).unwrap();
    assert!(t.termination.is_none());
    assert_eq!(t.samples.len(), 51);
    assert!((t.last().u[0] - 3.5).abs() < 1e-6);
    assert!(t.max_drift() < 1e-6);
}
