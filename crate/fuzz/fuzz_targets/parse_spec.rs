#![no_main]

use libfuzzer_sys::fuzz_target;
use symext_dsl::{parse_spec, render_document};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = parse_spec(text) {
        let again = parse_spec(&render_document(&doc)).expect("rendered documents parse");
        assert_eq!(doc, again);
    }
});
