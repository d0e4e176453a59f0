#![no_main]

use libfuzzer_sys::fuzz_target;
use tatecoh::format::parse_degree_range;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((lo, hi)) = parse_degree_range(text) {
        assert!(lo <= hi);
    }
});
