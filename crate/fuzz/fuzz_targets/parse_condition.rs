#![no_main]

use libfuzzer_sys::fuzz_target;
use symext_dsl::parse_condition;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(c) = parse_condition(text) {
            let _ = c.label();
        }
    }
});
