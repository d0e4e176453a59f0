#![no_main]

use libfuzzer_sys::fuzz_target;
use tatecoh::format::{bundle_to_value, parse_bundle};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = parse_bundle(text) {
        let again = parse_bundle(&bundle_to_value(&e).to_string()).expect("emitted bundle must re-parse");
        assert_eq!(again, e);
    }
});
