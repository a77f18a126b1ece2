//! Snapshot of the JSON reports for every catalog model and fibration.
//! Regenerate with `HILALI_BLESS=1 cargo test -p hilali-cli --test golden`.

use std::path::PathBuf;
use std::process::Command;

use serde_json::{Map, Value};

fn json_of(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_hilali"))
        .args(args)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn check(name: &str, actual: Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    let rendered = serde_json::to_string_pretty(&actual).unwrap() + "\n";
    if std::env::var_os("HILALI_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, rendered).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!(
            "{}: {e}; run with HILALI_BLESS=1 to create it",
            path.display()
        )
    });
    let expected: Value = serde_json::from_str(&expected).unwrap();
    if expected != actual {
        let (Value::Object(e), Value::Object(a)) = (&expected, &actual) else {
            unreachable!()
        };
        let drifted: Vec<&String> = a
            .keys()
            .chain(e.keys())
            .filter(|k| e.get(*k) != a.get(*k))
            .collect();
        panic!("{name}: reports drifted for {drifted:?}; rerun with HILALI_BLESS=1 if intended");
    }
}

#[test]
fn catalog_invariants_reports() {
    let mut all = Map::new();
    for key in hilali_core::catalog::model_keys() {
        all.insert(
            key.to_string(),
            json_of(&["invariants", &format!("catalog:{key}"), "--json"]),
        );
    }
    check("invariants.json", Value::Object(all));
}

#[test]
fn catalog_fibration_reports() {
    let mut all = Map::new();
    for key in hilali_core::catalog::fibration_keys() {
        all.insert(
            key.to_string(),
            json_of(&["fibration-check", &format!("catalog:{key}"), "--json"]),
        );
    }
    check("fibrations.json", Value::Object(all));
}

#[test]
fn bound_reports() {
    let mut all = Map::new();
    for (label, args) in [
        ("params:1,0,1", vec!["bound", "--params", "1,0,1", "--json"]),
        (
            "params:18,0,7",
            vec!["bound", "--params", "18,0,7", "--json"],
        ),
        (
            "threshold:1/4",
            vec!["bound", "--threshold", "1/4", "--json"],
        ),
    ] {
        all.insert(label.to_string(), json_of(&args));
    }
    check("bounds.json", Value::Object(all));
}

#[test]
fn cp3_report_matches_the_documented_shape() {
    let v = json_of(&["invariants", "catalog:cpn:3", "--json"]);
    assert_eq!(v["dim_pi"], 2);
    assert_eq!(v["dim_H"], 4);
    assert_eq!(v["h"], serde_json::json!({"num": "1", "den": "2"}));
}
