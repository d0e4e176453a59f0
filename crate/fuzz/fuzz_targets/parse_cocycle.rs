#![no_main]

use libfuzzer_sys::fuzz_target;
use tatecoh::format::{cocycle_to_value, parse_cocycle};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_cocycle(text) {
        let again = parse_cocycle(&cocycle_to_value(&f).to_string()).expect("emitted cocycle must re-parse");
        assert_eq!(again, f);
    }
});
