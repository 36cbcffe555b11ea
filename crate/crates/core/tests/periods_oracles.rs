use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use todakit_core::curve::{build_curve, BranchId, CurveSpec};
use todakit_core::frame::Frame;
use todakit_core::periods::{
    abel_between_infinities, b_periods_of, normalized_holomorphic_basis, third_kind_differential, Periods,
};

fn g1() -> CurveSpec {
    build_curve(1, &[2.0], &[3.0]).unwrap()
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    while (a - b).abs() > 1e-16 * a {
        let (na, nb) = (0.5 * (a + b), (a * b).sqrt());
        a = na;
        b = nb;
    }
    a
}

/// Complete elliptic integral of the first kind, `K(k) = π/(2·AGM(1, k'))`.
fn ellip_k(k2: f64) -> f64 {
    PI / (2.0 * agm(1.0, (1.0 - k2).sqrt()))
}

pub fn random_curve(rng: &mut ChaCha8Rng, g: usize) -> CurveSpec {
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

#[test]
fn g1_riemann_matrix_matches_agm() {
    let p = normalized_holomorphic_basis(&g1()).unwrap();
    // Roots 0<1<2<3: modulus k² = (e3-e2)(e4-e1)/((e4-e2)(e3-e1)) = 3/4.
    let tau = Complex64::new(0.0, ellip_k(0.25) / ellip_k(0.75));
    let b = p.data().riemann[0][0];
    assert!((b - tau).norm() < 1e-9, "{b} vs {tau}");
}

#[test]
fn riemann_matrix_symmetric_positive_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in 1..=3 {
        for _ in 0..4 {
            let c = random_curve(&mut rng, g);
            let p = Periods::compute(&c, 1e-10).unwrap();
            let b = &p.data().riemann;
            for i in 0..g {
                for j in 0..g {
                    assert!((b[i][j] - b[j][i]).norm() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn abel_integral_of_g1_is_half_mod_lattice() {
    let p = normalized_holomorphic_basis(&g1()).unwrap();
    let a = abel_between_infinities(&p)[0];
    let b = p.data().riemann[0][0];
    let n2 = (a.im / b.im).round();
    let rest = a - b * n2;
    let n1 = (rest.re - 0.5).round();
    assert!((rest - Complex64::new(0.5 + n1, 0.0)).norm() < 1e-8, "{a}");
}

#[test]
fn b_periods_of_omega_alpha_match_abel_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in 1..=3 {
        let c = random_curve(&mut rng, g);
        let p = normalized_holomorphic_basis(&c).unwrap();
        let alpha: Vec<Complex64> = (0..g).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let om = third_kind_differential(&p, &alpha).unwrap();
        let bp = b_periods_of(&p, &om);
        let abel = abel_between_infinities(&p);
        for k in 0..g {
            let ab: Complex64 = (0..g).map(|l| alpha[l] * p.data().riemann[k][l]).sum();
            let expect = 2.0 * PI * Complex64::i() * abel[k] - ab;
            assert!((bp[k] - expect).norm() < 1e-7, "g={g} k={k}: {} vs {}", bp[k], expect);
        }
    }
}

#[test]
fn omega0_b_periods_increase_in_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in 1..=3 {
        let c = random_curve(&mut rng, g);
        let f = Frame::new(&c, &zero(g), 1e-10).unwrap();
        let m: Vec<f64> = f
            .b_periods()
            .iter()
            .map(|z| {
                let q = z / (2.0 * PI * Complex64::i());
                assert!(q.im.abs() < 1e-9);
                q.re
            })
            .collect();
        for w in m.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(m[0] > 0.0 && m[g - 1] < 1.0, "{m:?}");
    }
}

#[test]
fn bidifferential_symmetry_and_b_periods() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let curves = vec![g1(), random_curve(&mut rng, 2), random_curve(&mut rng, 3)];
    for c in curves {
        let p = normalized_holomorphic_basis(&c).unwrap();
        let ids = c.branch_ids();
        for &a in &ids {
            for &b in &ids {
                if a != b {
                    let ab = p.w_pair(a, b).unwrap();
                    let ba = p.w_pair(b, a).unwrap();
                    assert!((ab - ba).norm() < 1e-7 * ab.norm().max(1.0), "{a} {b}: {ab} {ba}");
                }
            }
            for l in 1..=c.genus() {
                let lhs = p.w_b_period(a, l);
                let rhs = 2.0 * PI * Complex64::i() * p.omega_at(l, a);
                assert!((lhs - rhs).norm() < 1e-7 * rhs.norm().max(1.0), "{a} l={l}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn quadrature_refinement_is_stable() {
    let c = build_curve(2, &[1.8, 3.9], &[2.6, 5.2]).unwrap();
    let coarse = Periods::compute(&c, 1e-10).unwrap();
    let fine = Periods::compute(&c, 1e-12).unwrap();
    for (r1, r2) in coarse.data().riemann.iter().zip(&fine.data().riemann) {
        for (a, b) in r1.iter().zip(r2) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn rauch_for_riemann_matrix_g1() {
    let c = g1();
    let h = 1e-4;
    let p = normalized_holomorphic_basis(&c).unwrap();
    let plus = normalized_holomorphic_basis(&c.with_branch(BranchId::U(1), 3.0 + h).unwrap()).unwrap();
    let minus = normalized_holomorphic_basis(&c.with_branch(BranchId::U(1), 3.0 - h).unwrap()).unwrap();
    let fd = (plus.data().riemann[0][0] - minus.data().riemann[0][0]) / (2.0 * h);
    let w = p.omega_at(1, BranchId::U(1));
    let an = Complex64::new(0.0, PI) * w * w;
    assert!((fd - an).norm() < 1e-6, "{fd} vs {an}");
}
