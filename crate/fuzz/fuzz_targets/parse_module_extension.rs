#![no_main]

use libfuzzer_sys::fuzz_target;
use tatecoh::format::{module_extension_to_value, parse_module_extension};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = parse_module_extension(text) {
        let again = parse_module_extension(&module_extension_to_value(&e).to_string())
            .expect("emitted extension must re-parse");
        assert_eq!(again.middle(), e.middle());
        assert_eq!(again.inject().matrix, e.inject().matrix);
    }
});
