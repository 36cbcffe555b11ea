use todakit_core::curve::build_curve;
use todakit_core::pell::{
    chebyshev_from_curve, chebyshev_on_support, default_grid, pell_residual, pell_residual_with_rhs, reduce_pell,
    signature_of, signature_on,
};
use todakit_core::{poly, Error};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
}

#[test]
fn g1_certificate_is_exact() {
    let c = build_curve(1, &[2.0], &[3.0]).unwrap();
    let cert = chebyshev_from_curve(&c, 2, &[1, 1]).unwrap();
    assert!(close(&cert.p, &[1.0, -3.0, 1.0], 1e-8), "{:?}", cert.p);
    assert!(close(&cert.q, &[1.0], 1e-8), "{:?}", cert.q);
    assert!(cert.residual < 1e-8);
    assert_eq!(cert.signature, vec![0, 0]);
    assert_eq!(signature_of(&[1.0, -3.0, 1.0], &c), vec![0, 0]);
}

#[test]
fn g1_residual_detects_perturbation() {
    let c = build_curve(1, &[2.0], &[3.0]).unwrap();
    let grid = default_grid(&c.bands());
    let d = c.delta_poly();
    assert!(pell_residual(&[1.0, -3.0, 1.0], &[1.0], &d, &grid) < 1e-12);
    assert!(pell_residual(&[1.001, -3.0, 1.0], &[1.0], &d, &grid) >= 2e-3 - 1e-6);
}

#[test]
fn wrong_degree_is_rejected() {
    let c = build_curve(1, &[2.0], &[3.0]).unwrap();
    assert!(matches!(chebyshev_from_curve(&c, 3, &[2, 1]), Err(Error::NotRational(_))));
    let c = build_curve(1, &[2.0], &[3.3]).unwrap();
    assert!(matches!(chebyshev_from_curve(&c, 2, &[1, 1]), Err(Error::NotRational(_))));
}

#[test]
fn symmetric_quartic_support() {
    let r = 0.5f64.sqrt();
    let bands = [(-r, -0.5), (0.5, r)];
    let cert = chebyshev_on_support(&bands, 4, &[2, 2]).unwrap();
    assert!(close(&cert.p, &[17.0, 0.0, -96.0, 0.0, 128.0], 1e-6), "{:?}", cert.p);
    assert!((poly::eval(&cert.p, 0.5) - 1.0).abs() < 1e-8);
    assert_eq!(cert.q.len() - 1, 4 - 1 - 1);
    assert_eq!(cert.signature, vec![1, 1]);
    assert!(cert.residual < 1e-8, "{}", cert.residual);
    let red = reduce_pell(&cert.p, &cert.q, &cert.delta, &default_grid(&bands)).unwrap();
    assert!(!red.odd);
    assert!(close(&red.p_hat, &[17.0, -96.0, 128.0], 1e-6));
    assert!(red.residual < 1e-8);
    // Band endpoints are ±1 and the support is bounded by 1.
    for &(lo, hi) in &bands {
        for z in [lo, hi] {
            assert!((poly::eval(&cert.p, z).abs() - 1.0).abs() < 1e-8);
        }
        for z in poly::chebyshev_nodes(64, lo, hi) {
            assert!(poly::eval(&cert.p, z).abs() <= 1.0 + 1e-8);
        }
    }
}

#[test]
fn chebyshev_t3_odd_reduction() {
    let p = [0.0, -3.0, 0.0, 4.0];
    let q = [-1.0, 0.0, 4.0];
    let delta = [-1.0, 0.0, 1.0];
    let grid = default_grid(&[(-1.0, 1.0)]);
    assert!(pell_residual(&p, &q, &delta, &grid) < 1e-12);
    let red = reduce_pell(&p, &q, &delta, &grid).unwrap();
    assert!(red.odd);
    assert_eq!(red.p_hat, vec![-3.0, 4.0]);
    assert!(red.residual < 1e-12);
    assert!(close(red.p_tilde.as_ref().unwrap(), &[-1.0, 18.0, -48.0, 32.0], 1e-12));
    assert!(red.tilde_residual.unwrap() < 1e-12);
}

#[test]
fn singular_single_band_example() {
    for lam in [0.5f64.sqrt(), 0.9, 1.3] {
        let l2 = lam * lam;
        let p = [-l2, 0.0, 1.0];
        let q = [0.0, 1.0];
        let delta = [0.0 - 2.0 * l2, 0.0, 1.0];
        let b = (2.0f64).sqrt() * lam;
        let grid = default_grid(&[(-b, b)]);
        assert!(pell_residual_with_rhs(&p, &q, &delta, l2 * l2, &grid) < 1e-12);
        assert_eq!(signature_on(&p, &[(-b, b)]), vec![1]);
    }
}

fn bisect(f: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if poly::eval(f, lo) * poly::eval(f, m) <= 0.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn g2_support_of_a_cubic() {
    // 4s³ - 3.3s has critical values beyond ±1, so |P| ≤ 1 on three bands.
    let p = [0.0, -3.3, 0.0, 4.0];
    let mut ends = Vec::new();
    for target in [1.0, -1.0] {
        let f = poly::sub(&p, &[target]);
        let grid: Vec<f64> = (0..=3000).map(|i| -1.5 + i as f64 * 1e-3).collect();
        for w in grid.windows(2) {
            if poly::eval(&f, w[0]) * poly::eval(&f, w[1]) < 0.0 {
                ends.push(bisect(&f, w[0], w[1]));
            }
        }
    }
    ends.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(ends.len(), 6, "{ends:?}");
    let bands: Vec<(f64, f64)> = ends.chunks(2).map(|c| (c[0], c[1])).collect();
    let cert = chebyshev_on_support(&bands, 3, &[1, 1, 1]).unwrap();
    assert!(close(&cert.p, &p, 1e-6), "{:?}", cert.p);
    assert!(cert.residual < 1e-8, "{}", cert.residual);
    assert_eq!(cert.q.len(), 1);
    assert_eq!(cert.signature, vec![0, 0, 0]);
    let red = reduce_pell(&cert.p, &cert.q, &cert.delta, &default_grid(&bands));
    assert!(matches!(red, Err(Error::ParityViolation(_))) || red.unwrap().odd);
}

#[test]
fn double_zeros_are_the_interior_critical_points() {
    let c = todakit_core::curve::build_curve(1, &[2.0], &[3.0]).unwrap();
    let cert = chebyshev_from_curve(&c, 2, &[1, 1]).unwrap();
    assert!(todakit_core::pell::double_zeros(&cert, &c, 1e-8).unwrap().is_empty());
    // N = 4 on the same support: measures (½, ½) = (2/4, 2/4); N - g - 1 = 2.
    let cert4 = chebyshev_from_curve(&c, 4, &[2, 2]).unwrap();
    let z = todakit_core::pell::double_zeros(&cert4, &c, 1e-8).unwrap();
    assert_eq!(z.len(), 2);
    assert_eq!(cert4.signature.iter().sum::<usize>(), 2);
    for w in z {
        assert!(c.bands().iter().any(|&(a, b)| a < w && w < b));
    }
}
