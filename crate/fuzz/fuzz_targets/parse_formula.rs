#![no_main]

use libfuzzer_sys::fuzz_target;
use symext_dsl::{parse_formula, parse_spec};

const PRELUDE: &str = "system C = cohen(indices=3, bits=1, support=1);\nname x = gen(0);\nname y = check 1;\n";

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let doc = parse_spec(PRELUDE).expect("prelude parses");
    let _ = parse_formula(&doc, text);
});
