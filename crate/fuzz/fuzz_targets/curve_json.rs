#![no_main]

use libfuzzer_sys::fuzz_target;
use todakit_cli::parse::{parse_curve_input, CurveInput};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(CurveInput::Curve(c)) = parse_curve_input(text) {
        let pts = c.branch_points();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts.iter().all(|p| p.is_finite()));
    }
});
