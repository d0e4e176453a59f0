#![no_main]

use libfuzzer_sys::fuzz_target;
use tatecoh::format::parse_kernel_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inv) = parse_kernel_spec(text) {
        assert!(inv.is_finite());
    }
});
