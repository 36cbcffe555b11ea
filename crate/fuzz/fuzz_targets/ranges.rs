#![no_main]

use libfuzzer_sys::fuzz_target;
use todakit_cli::parse::{parse_n_range, parse_t_range, MAX_RANGE_LEN};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((lo, hi)) = parse_n_range(text) {
        assert!(lo <= hi);
    }
    if let Ok(ts) = parse_t_range(text) {
        assert!(!ts.is_empty() && ts.len() <= MAX_RANGE_LEN);
        assert!(ts.iter().all(|t| t.is_finite()));
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }
});
