#![no_main]

use libfuzzer_sys::fuzz_target;
use todakit_cli::parse::parse_k_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(k) = parse_k_list(text) {
        assert!(!k.is_empty() && k.iter().all(|&v| v > 0));
    }
});
