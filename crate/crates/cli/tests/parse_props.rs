use num_complex::Complex64;
use proptest::prelude::*;
use todakit_cli::parse::*;

proptest! {
    #[test]
    fn parsers_never_panic(s in ".{0,40}") {
        let _ = parse_curve_input(&s);
        let _ = parse_path_spec(&s, 1);
        let _ = parse_path_spec(&s, 2);
        let _ = parse_alpha(&s, 2);
        let _ = parse_k_list(&s);
        let _ = parse_tol(&s);
        let _ = parse_n_range(&s);
        let _ = parse_t_range(&s);
    }

    #[test]
    fn accepted_t_ranges_are_strictly_increasing(a in -1e20f64..1e20, len in 0f64..1e3, step in 1e-3f64..10.0) {
        let s = format!("{a:?}:{:?}:{step:?}", a + len);
        if let Ok(ts) = parse_t_range(&s) {
            prop_assert!(ts.windows(2).all(|w| w[1] > w[0]));
            prop_assert!(ts.len() <= MAX_RANGE_LEN);
        }
    }

    #[test]
    fn complex_round_trips(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let s = format!("{re:?}{}{:?}i", if im < 0.0 { "" } else { "+" }, im);
        let z = parse_complex(&s).unwrap();
        prop_assert_eq!(z, Complex64::new(re, im));
    }

    #[test]
    fn k_list_round_trips(k in prop::collection::vec(1usize..50, 1..5)) {
        let s = k.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        prop_assert_eq!(parse_k_list(&s).unwrap(), k);
    }

    #[test]
    fn tol_rejects_nonpositive(v in -1e3f64..0.0) {
        let s = format!("drift={v:?}");
        prop_assert!(parse_tol(&s).is_err());
    }

    #[test]
    fn n_range_is_ordered(lo in -100i64..100, len in 0i64..50) {
        let (a, b) = parse_n_range(&format!("{lo}:{}", lo + len)).unwrap();
        prop_assert_eq!((a, b), (lo, lo + len));
        let s = format!("{}:{lo}", lo + len + 1);
        prop_assert!(parse_n_range(&s).is_err());
    }

    #[test]
    fn t_range_is_increasing_and_bounded(a in -5f64..5.0, len in 0f64..3.0, step in 0.01f64..1.0) {
        let ts = parse_t_range(&format!("{a:?}:{:?}:{step:?}", a + len)).unwrap();
        prop_assert!((ts[0] - a).abs() < 1e-12);
        prop_assert!(ts.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(*ts.last().unwrap() <= a + len + 1e-9 * (1.0 + len));
    }

    #[test]
    fn genus1_path_endpoints(x0 in 1.1f64..5.0, d in 0.01f64..2.0, step in 1e-3f64..0.1) {
        let p = parse_path_spec(&format!("{x0:?}:{:?}:{step:?}", x0 + d), 1).unwrap();
        prop_assert_eq!(p.waypoints.len(), 2);
        prop_assert_eq!(p.waypoints[0][0], x0);
        prop_assert_eq!(p.step, step);
    }

    #[test]
    fn curve_json_accepts_ordered_points(g in 1usize..4, gaps in prop::collection::vec(0.05f64..2.0, 6)) {
        let mut pts = Vec::new();
        let mut last = 1.0;
        for i in 0..2 * g {
            last += gaps[i];
            pts.push(last);
        }
        let x: Vec<f64> = pts.iter().step_by(2).copied().collect();
        let u: Vec<f64> = pts.iter().skip(1).step_by(2).copied().collect();
        let text = serde_json::json!({"genus": g, "x": x, "u": u}).to_string();
        let c = parse_curve_json(&text).unwrap();
        prop_assert_eq!(c.x(), &x[..]);
        let mut bad = u.clone();
        bad[0] = x[0] - 0.01;
        let text = serde_json::json!({"genus": g, "x": x, "u": bad}).to_string();
        prop_assert!(parse_curve_json(&text).is_err());
    }
}
