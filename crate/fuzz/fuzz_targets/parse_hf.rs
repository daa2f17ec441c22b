#![no_main]

use libfuzzer_sys::fuzz_target;
use symext_dsl::parse_hf;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_hf(text);
    }
});
