use num_complex::Complex64;
use todakit_core::curve::build_curve;
use todakit_core::isoflow::variational_order;
use todakit_core::variational::variational_errors;

#[test]
fn variational_formulas_g1_and_g2() {
    for (g, x, u, a) in [(1, vec![2.0], vec![3.0], 0.0), (2, vec![1.8, 3.9], vec![2.6, 5.2], 0.2)] {
        let c = build_curve(g, &x, &u).unwrap();
        let alpha = vec![Complex64::new(a, 0.0); g];
        for h in [1e-3, 1e-4] {
            eprintln!("g={g} h={h}: {:?}", variational_errors(&c, &alpha, h).unwrap());
        }
        let r = variational_order(&c, &alpha, 1e-3, 1e-4).unwrap();
        assert!(r.all_pass(), "g={g}: {:?}", r.checks);
    }
}
