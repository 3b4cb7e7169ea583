//! End-to-end tests of the binary: golden outputs, the exit-code contract,
//! and JSON outputs validated against the shipped schemas.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kroots"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("no signal")
}

fn schema(name: &str) -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(&path).expect("schema file exists"))
        .expect("schema parses")
}

/// Structural validator covering the subset of JSON Schema the shipped
/// schemas use: type, properties, required, additionalProperties, items,
/// propertyNames, pattern, minimum.
fn validate(value: &serde_json::Value, schema: &serde_json::Value, path: &str) {
    use serde_json::Value;
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "integer" => value.is_i64() || value.is_u64(),
            "number" => value.is_number(),
            other => panic!("unsupported schema type {other}"),
        };
        assert!(ok, "{path}: expected {ty}, got {value}");
    }
    if let Some(pattern) = schema.get("pattern").and_then(Value::as_str) {
        let re = regex::Regex::new(pattern).expect("valid pattern");
        let s = value
            .as_str()
            .unwrap_or_else(|| panic!("{path}: not a string"));
        assert!(re.is_match(s), "{path}: {s:?} does not match {pattern}");
    }
    if let Some(minimum) = schema.get("minimum").and_then(Value::as_i64) {
        let v = value
            .as_i64()
            .unwrap_or_else(|| panic!("{path}: not an integer"));
        assert!(v >= minimum, "{path}: {v} below minimum {minimum}");
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required {
                let key = key.as_str().expect("required key is a string");
                assert!(obj.contains_key(key), "{path}: missing key {key}");
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        let additional = schema.get("additionalProperties");
        let names = schema.get("propertyNames");
        for (key, sub) in obj {
            if let Some(names) = names {
                validate(
                    &Value::String(key.clone()),
                    names,
                    &format!("{path}.{key}(name)"),
                );
            }
            if let Some(prop_schema) = props.and_then(|p| p.get(key)) {
                validate(sub, prop_schema, &format!("{path}.{key}"));
            } else {
                match additional {
                    Some(Value::Bool(false)) => panic!("{path}: unexpected key {key}"),
                    Some(Value::Bool(true)) | None => {}
                    Some(s) => validate(sub, s, &format!("{path}.{key}")),
                }
            }
        }
    }
    if let Some(arr) = value.as_array() {
        if let Some(items) = schema.get("items") {
            for (i, item) in arr.iter().enumerate() {
                validate(item, items, &format!("{path}[{i}]"));
            }
        }
    }
}

#[test]
fn basis_plain_lists_the_canonical_table() {
    let out = stdout_of(&["basis", "-n", "4", "-k", "2"]);
    let expect = "\
1111  (x1+x2)(x3+x4)  height 2
1112  (x1+x2)(x3-x4)  height 1
1121  (x1+x4)(x2-x3)  height 1
1122  (x1-x4)(x2-x3)  height 0
1211  (x1-x2)(x3+x4)  height 1
1212  (x1-x2)(x3-x4)  height 0
";
    assert_eq!(out, expect);
}

#[test]
fn basis_json_validates_against_the_schema() {
    let out = stdout_of(&["basis", "-n", "4", "-k", "2", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    validate(&value, &schema("basis.schema.json"), "$");
    assert_eq!(value["basis"].as_array().unwrap().len(), 6);
    assert_eq!(value["basis"][0]["element"], "(x1+x2)(x3+x4)");
}

#[test]
fn basis_csv_has_fixed_columns() {
    let out = stdout_of(&["basis", "-n", "4", "-k", "1", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "label,element,height");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 3));
}

#[test]
fn decompose_root_golden() {
    let out = stdout_of(&[
        "decompose",
        "-n",
        "4",
        "-k",
        "2",
        "--root",
        "(x1-x3)(x2-x4)",
    ]);
    assert_eq!(out, "1122  1\n1212  1\n");
    let csv = stdout_of(&[
        "decompose",
        "-n",
        "4",
        "-k",
        "2",
        "--root",
        "(x1-x3)(x2-x4)",
        "--format",
        "csv",
    ]);
    assert_eq!(csv, "label,numerator,denominator\n1122,1,1\n1212,1,1\n");
}

#[test]
fn decompose_accepts_unnormalized_roots() {
    let out = stdout_of(&[
        "decompose",
        "-n",
        "4",
        "-k",
        "2",
        "--root",
        "(-x4-x3)(x2-x1)",
    ]);
    // (-x4-x3)(x2-x1) = (x1-x2)(x3+x4), a basis element
    assert_eq!(out, "1211  1\n");
}

#[test]
fn decompose_monomial_can_go_negative() {
    let out = stdout_of(&["decompose", "-n", "4", "-k", "1", "--monomial", "x4"]);
    assert_eq!(out, "1111  1/2\n1112  -1/2\n");
}

#[test]
fn decompose_json_validates_against_the_schema() {
    let out = stdout_of(&[
        "decompose",
        "-n",
        "4",
        "-k",
        "2",
        "--monomial",
        "x1*x2",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    validate(&value, &schema("decomposition.schema.json"), "$");
    assert_eq!(value["input"], "x1*x2");
    assert_eq!(value["coeffs"]["1111"], "1/4");
}

#[test]
fn decompose_scan_reports_positivity() {
    let out = stdout_of(&[
        "decompose",
        "-n",
        "4",
        "-k",
        "1",
        "--all",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    validate(&value, &schema("scan.schema.json"), "$");
    let rows = value["monomials"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let is_last = row["monomial"] == "x4";
        assert_eq!(row["positive"], !is_last, "{row}");
        assert_eq!(row["reverse_lattice"], !is_last, "{row}");
    }
}

#[test]
fn decompose_requires_exactly_one_input() {
    assert_eq!(exit_code(&["decompose", "-n", "4", "-k", "2"]), 2);
    assert_eq!(
        exit_code(&[
            "decompose",
            "-n",
            "4",
            "-k",
            "2",
            "--root",
            "(x1-x3)(x2-x4)",
            "--all"
        ]),
        2
    );
}

#[test]
fn spherical_csv_emits_the_value_table() {
    let out = stdout_of(&[
        "spherical",
        "-n",
        "4",
        "-k",
        "1",
        "--all",
        "--format",
        "csv",
    ]);
    assert_eq!(out, "1,1\n1,-1/3\n");
    // --j restricts to one row
    let row = stdout_of(&[
        "spherical",
        "-n",
        "4",
        "-k",
        "1",
        "--j",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(row, "1,-1/3\n");
}

#[test]
fn spherical_json_validates_against_the_schema() {
    let out = stdout_of(&["spherical", "-n", "4", "-k", "2", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    validate(&value, &schema("spherical.schema.json"), "$");
    let functions = value["functions"].as_array().unwrap();
    assert_eq!(functions.len(), 3);
    for f in functions {
        assert_eq!(f["certificate"]["ok"], true);
    }
    assert_eq!(value["table"].as_array().unwrap().len(), 3);
}

#[test]
fn spherical_rejects_out_of_range_j() {
    assert_eq!(
        exit_code(&["spherical", "-n", "4", "-k", "1", "--j", "2"]),
        2
    );
}

#[test]
fn matrix_json_validates_against_the_schema() {
    let out = stdout_of(&[
        "matrix", "-n", "4", "-k", "2", "--perm", "(1 2)", "--format", "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    validate(&value, &schema("matrix.schema.json"), "$");
    assert_eq!(value["sign_coherent"], true);
    assert_eq!(value["matrix"].as_array().unwrap().len(), 6);
}

#[test]
fn matrix_accepts_one_line_notation() {
    let a = stdout_of(&["matrix", "-n", "4", "-k", "2", "--perm", "2 1 3 4"]);
    let b = stdout_of(&["matrix", "-n", "4", "-k", "2", "--perm", "(1 2)"]);
    assert_eq!(a, b);
    assert_eq!(
        exit_code(&["matrix", "-n", "4", "-k", "2", "--perm", "1 1 3 4"]),
        2
    );
}

#[test]
fn filtration_json_validates_against_the_schema() {
    let out = stdout_of(&["filtration", "-n", "6", "-k", "3", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    validate(&value, &schema("filtration.schema.json"), "$");
    let levels = value["levels"].as_array().unwrap();
    let dims: Vec<i64> = levels
        .iter()
        .map(|l| l["dimension"].as_i64().unwrap())
        .collect();
    assert_eq!(dims, vec![5, 14, 19, 20]);
    assert!(levels.iter().all(|l| l["ok"] == true));
}

#[test]
fn filtration_rejects_levels_beyond_k() {
    assert_eq!(
        exit_code(&["filtration", "-n", "4", "-k", "2", "--level", "3"]),
        2
    );
}

#[test]
fn verify_json_validates_and_is_deterministic() {
    let args = [
        "verify", "-n", "4", "-k", "2", "--seed", "42", "--format", "json",
    ];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    assert_eq!(a, b);
    let value: serde_json::Value = serde_json::from_str(&a).unwrap();
    validate(&value, &schema("verify.schema.json"), "$");
    assert_eq!(value["ok"], true);
    assert_eq!(value["seed"], 42);
}

#[test]
fn verify_plain_summarizes() {
    let out = stdout_of(&["verify", "-n", "4", "-k", "1", "--seed", "1"]);
    assert!(out
        .lines()
        .all(|l| l.starts_with("pass ") || l.ends_with("checks passed")));
    assert!(out.trim_end().ends_with("checks passed"));
}

#[test]
fn exit_code_contract() {
    // parameter errors
    assert_eq!(exit_code(&["basis", "-n", "3", "-k", "2"]), 2);
    assert_eq!(exit_code(&["basis", "-n", "1", "-k", "1"]), 2);
    // expression parse errors
    assert_eq!(
        exit_code(&["decompose", "-n", "4", "-k", "2", "--root", "(x1-x3)(x2"]),
        3
    );
    assert_eq!(
        exit_code(&["decompose", "-n", "4", "-k", "1", "--monomial", "zebra"]),
        3
    );
    // wrong factor count is a parameter problem, not a syntax problem
    assert_eq!(
        exit_code(&["decompose", "-n", "4", "-k", "2", "--root", "(x1-x2)"]),
        2
    );
    // clap usage errors also land on 2
    assert_eq!(exit_code(&["basis", "-k", "2"]), 2);
    assert_eq!(exit_code(&["no-such-command"]), 2);
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("kroots-cli-test-{}.json", std::process::id()));
    let path_str = path.to_str().unwrap();
    let _ = std::fs::remove_file(&path);
    let out = stdout_of(&[
        "basis", "-n", "4", "-k", "2", "--format", "json", "--out", path_str,
    ]);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let direct = stdout_of(&["basis", "-n", "4", "-k", "2", "--format", "json"]);
    assert_eq!(written, direct);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn round_trips_every_canonical_element() {
    // print with `basis`, feed each element back through `decompose`
    for (n, k) in [(4u32, 2u32), (5, 2)] {
        let out = stdout_of(&[
            "basis",
            "-n",
            &n.to_string(),
            "-k",
            &k.to_string(),
            "--format",
            "csv",
        ]);
        for line in out.lines().skip(1) {
            let mut cols = line.split(',');
            let label = cols.next().unwrap();
            let element = cols.next().unwrap();
            let dec = stdout_of(&[
                "decompose",
                "-n",
                &n.to_string(),
                "-k",
                &k.to_string(),
                "--root",
                element,
            ]);
            assert_eq!(dec, format!("{label}  1\n"));
        }
    }
}
