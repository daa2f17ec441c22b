use std::collections::BTreeSet;

use serde_json::Value;
use symext_dsl::{parse_spec, run, Config, Limits};

fn schema() -> Value {
    let text = include_str!("../../../docs/report.schema.json");
    serde_json::from_str(text).unwrap()
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

fn conforms(v: &Value, s: &Value, root: &Value) {
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let name = r.trim_start_matches("#/$defs/");
        return conforms(v, &root["$defs"][name], root);
    }
    if let Some(options) = s.get("enum").and_then(Value::as_array) {
        assert!(options.contains(v), "{v} not in {options:?}");
    }
    match s.get("type").and_then(Value::as_str) {
        Some("object") => {
            let obj = v.as_object().expect("object");
            let required: BTreeSet<String> =
                s["required"].as_array().into_iter().flatten().map(|k| k.as_str().unwrap().to_string()).collect();
            assert!(required.is_subset(&keys(v)), "missing keys in {v}");
            for (k, item) in obj {
                match s.get("properties").and_then(|p| p.get(k)) {
                    Some(sub) => conforms(item, sub, root),
                    None => match s.get("additionalProperties") {
                        Some(Value::Bool(false)) => panic!("unexpected key {k}"),
                        Some(sub @ Value::Object(_)) => conforms(item, sub, root),
                        _ => {}
                    },
                }
            }
        }
        Some("array") => v.as_array().unwrap().iter().for_each(|x| conforms(x, &s["items"], root)),
        Some("integer") => assert!(v.is_u64(), "{v} is not a non-negative integer"),
        Some("string") => assert!(v.is_string()),
        _ => {}
    }
}

#[test]
fn scenario_report_matches_schema() {
    let text = include_str!("../../../docs/scenarios/generic_structures.symext");
    let doc = parse_spec(text).unwrap();
    let root = schema();
    for timing in [false, true] {
        let report = run(&doc, &Config { timing, ..Config::default() });
        let v: Value = serde_json::from_str(&report.to_json()).unwrap();
        conforms(&v, &root, &root);
        assert_eq!(v["summary"]["exit_code"], 0);
    }
}

#[test]
fn capped_report_matches_schema() {
    let text = include_str!("../../../docs/scenarios/generic_structures.symext");
    let doc = parse_spec(text).unwrap();
    let root = schema();
    let config = Config { limits: Limits { max_poset: 5, ..Limits::default() }, ..Config::default() };
    let v: Value = serde_json::from_str(&run(&doc, &config).to_json()).unwrap();
    conforms(&v, &root, &root);
    assert_eq!(v["summary"]["exit_code"], 3);
}
