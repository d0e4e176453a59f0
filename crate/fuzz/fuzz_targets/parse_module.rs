#![no_main]

use libfuzzer_sys::fuzz_target;
use tatecoh::format::{module_to_value, parse_module};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_module(text) {
        let again = parse_module(&module_to_value(&m).to_string()).expect("emitted module must re-parse");
        assert_eq!(again, m);
    }
});
