use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use todakit_core::curve::{build_curve, CurveSpec};
use todakit_core::equilibrium::{
    equilibrium_measures, gap_vanishing_polynomial, isoequilibrium_flow, measures_to_bperiods, rational_measure_detect,
};
use todakit_core::periods::{b_periods_of, normalized_holomorphic_basis, third_kind_differential};

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

#[test]
fn gap_polynomial_matches_omega0_and_dictionary() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for g in 1..=3 {
        for _ in 0..3 {
            let c = random_curve(&mut rng, g);
            let q = gap_vanishing_polynomial(&c).unwrap();
            let p = normalized_holomorphic_basis(&c).unwrap();
            let om = third_kind_differential(&p, &vec![Complex64::new(0.0, 0.0); g]).unwrap();
            for (a, b) in q.iter().zip(&om.coeffs) {
                assert!((-a - b).norm() < 1e-9, "g={g}: {q:?} vs {:?}", om.coeffs);
            }
            let m = equilibrium_measures(&c).unwrap();
            assert!((m.rho.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(m.rho.iter().all(|r| *r > 0.0));
            let via_measures = measures_to_bperiods(&m);
            let direct = b_periods_of(&p, &om);
            for (a, b) in via_measures.iter().zip(&direct) {
                assert!((a - b).norm() < 1e-7, "g={g}: {a} vs {b}");
            }
            // Sign alternation of q across consecutive bands.
            let signs: Vec<f64> =
                c.bands().iter().map(|(lo, hi)| todakit_core::poly::eval(&q, 0.5 * (lo + hi)).signum()).collect();
            for w in signs.windows(2) {
                assert_eq!(w[0], -w[1]);
            }
        }
    }
}

#[test]
fn g1_isoequilibrium_flow() {
    let c = build_curve(1, &[2.0], &[3.0]).unwrap();
    let t = isoequilibrium_flow(&c, &[vec![2.0], vec![3.0]], 0.01).unwrap();
    assert!(t.flow.termination.is_none());
    assert!((t.flow.last().u[0] - 4.0).abs() < 1e-6);
    assert!(t.measure_drift() < 1e-6);
    for m in &t.measures {
        assert_eq!(rational_measure_detect(m, 8, 1e-8).map(|r| r.n), Some(2));
    }
}

#[test]
fn g2_isoequilibrium_flow_short_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let c = random_curve(&mut rng, 2);
    let mut x1 = c.x().to_vec();
    x1[0] += 0.1;
    x1[1] -= 0.05;
    let t = isoequilibrium_flow(&c, &[c.x().to_vec(), x1], 0.01).unwrap();
    assert!(t.flow.termination.is_none(), "{:?}", t.flow.termination);
    assert!(t.measure_drift() < 1e-6, "{}", t.measure_drift());
    let zero = isoequilibrium_flow(&c, &[c.x().to_vec(), c.x().to_vec()], 0.01).unwrap();
    assert_eq!(zero.measure_drift(), 0.0);
}
