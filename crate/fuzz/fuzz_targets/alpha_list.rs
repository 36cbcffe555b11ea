#![no_main]

use libfuzzer_sys::fuzz_target;
use todakit_cli::parse::parse_alpha;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for genus in 1..=3 {
        if let Ok(a) = parse_alpha(text, genus) {
            assert_eq!(a.len(), genus);
            assert!(a.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        }
    }
});
