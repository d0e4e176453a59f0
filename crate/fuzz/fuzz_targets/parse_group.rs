#![no_main]

use libfuzzer_sys::fuzz_target;
use tatecoh::format::{group_to_value, parse_group};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_group(text) {
        let again = parse_group(&group_to_value(&g).to_string()).expect("emitted group must re-parse");
        assert_eq!(again, g);
    }
});
