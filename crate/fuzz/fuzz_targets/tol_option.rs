#![no_main]

use libfuzzer_sys::fuzz_target;
use todakit_cli::parse::parse_tol;
use todakit_cli::tol::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((key, val)) = parse_tol(text) {
        assert!(val.is_finite() && val > 0.0);
        if let Ok(t) = Tolerances::new(&[(key.clone(), val)], 1.0) {
            assert_eq!(t.get(&key), val);
        }
    }
});
