#![no_main]

use libfuzzer_sys::fuzz_target;
use todakit_cli::parse::parse_path_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for genus in 1..=3 {
        if let Ok(p) = parse_path_spec(text, genus) {
            assert!(p.step.is_finite() && p.step > 0.0);
            assert!(p.waypoints.len() >= 2);
            assert!(p.waypoints.iter().all(|w| w.len() == genus && w.iter().all(|v| v.is_finite())));
        }
    }
});
