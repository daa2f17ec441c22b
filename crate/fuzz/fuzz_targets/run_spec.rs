#![no_main]

use libfuzzer_sys::fuzz_target;
use symext_dsl::{parse_spec, run, Config, Limits};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_spec(text) else { return };
    let limits = Limits { max_poset: 64, max_group: 48, rank_cap: 3, max_entries: 64 };
    let report = run(&doc, &Config { limits, jobs: 1, ..Config::default() });
    assert!((0..=3).contains(&report.exit_code()));
});
