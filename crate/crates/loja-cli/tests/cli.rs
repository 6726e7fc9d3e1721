//! End-to-end CLI tests: exact output lines, exit codes, determinism of
//! the emitted documents, and schema validity of the JSON report.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loja"))
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

fn sample(name: &str) -> String {
    repo_root()
        .join("poly-examples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bound_refine_f1_matches_published_line() {
    let out = run(&["bound", &sample("f1.poly"), "--refine", "--samples", "16"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(
        text.contains("theta0 in [8/9, 8/9] (refined; probe witness weight (8,7,6))"),
        "got: {text}"
    );
}

#[test]
fn bound_general_f1() {
    let out = run(&["bound", &sample("f1.poly")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("theta0 <= 10/11"));
}

#[test]
fn milnor_g4_and_f4() {
    let out = run(&["milnor", &sample("g4.poly")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "990");
    let out = run(&["milnor", &sample("f4.poly")]);
    assert_eq!(stdout(&out).trim(), "543");
}

#[test]
fn convert_both_directions() {
    let out = run(&["convert", "--theta", "8/9"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "eta0 = 8");
    let out = run(&["convert", "--eta", "1"]);
    assert_eq!(stdout(&out).trim(), "theta0 = 1/2");
    let out = run(&["convert", "--eta", "1", "--theta", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn probe_witness_curves() {
    let out = run(&["probe", &sample("f4.poly"), "--curve", &sample("f4_witness.curve.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ord f = 202, ord grad = 190, theta = 95/101"), "got: {text}");

    let out = run(&["probe", &sample("g_moduli.poly"), "--curve", &sample("g_witness.curve.json")]);
    let text = stdout(&out);
    assert!(text.contains("ord f = 132, ord grad = 126, theta = 21/22"), "got: {text}");
}

#[test]
fn sweep_reports_witness() {
    let out = run(&["sweep", &sample("f3.poly"), "--budget", "6", "--samples", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("theta >= 2/3 at weight (1,1,1)"), "got: {text}");
}

#[test]
fn product_and_power() {
    let out = run(&[
        "product",
        &sample("exceptional_axis.poly"),
        &sample("exceptional_axis.poly"),
        "--mult",
        "1,2",
        "--assume-ci-nondegenerate",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("theta0 <= 14/15 (axis sum B = 15)"));

    let out = run(&["power", &sample("exceptional_axis.poly"), "-m", "3", "--assume-ci-nondegenerate"]);
    assert!(stdout(&out).contains("theta0(f^3) <= 14/15"));

    // a non-convenient member is rejected with a usage error
    let out = run(&["product", &sample("f1.poly")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_polynomial_input() {
    let out = run(&["milnor", &sample("cusp.poly")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "8");
}

#[test]
fn diagram_svg_and_json_deterministic() {
    let a = run(&["diagram", &sample("f1.poly"), "--format", "svg"]);
    assert!(a.status.success());
    let b = run(&["diagram", &sample("f1.poly"), "--format", "svg"]);
    assert_eq!(stdout(&a), stdout(&b), "SVG must be byte-identical");
    assert_eq!(stdout(&a).matches("<circle").count(), 8);

    let j = run(&["diagram", &sample("f1.poly"), "--format", "json"]);
    let v: Value = serde_json::from_str(stdout(&j).trim()).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
    assert_eq!(v["segments"].as_array().unwrap().len(), 11);
    assert_eq!(v["regions"].as_array().unwrap().len(), 4);
}

#[test]
fn diagram_svg_rejects_other_dimensions() {
    let dir = std::env::temp_dir().join("loja-cli-test-n4");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("n4.poly");
    std::fs::write(&path, "z1^2 + z2^2 + z3^2 + z4^2\n").unwrap();
    let out = run(&["diagram", path.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_three_for_undecided_hypotheses() {
    let dir = std::env::temp_dir().join("loja-cli-test-und");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("und.poly");
    std::fs::write(&path, "z1^2 + 7*z1*z2 + z2^2\n").unwrap();
    let out = run(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "conditional bound exits 3");
    // the conditional result is still printed
    assert!(stdout(&out).contains("theta0 <= 1/2"));
    let out = run(&[
        "bound",
        path.to_str().unwrap(),
        "--assume-nondegenerate",
        "--assume-inv-tame",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parse_error_exits_two() {
    let dir = std::env::temp_dir().join("loja-cli-test-bad");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.poly");
    std::fs::write(&path, "z1 + z0\n").unwrap();
    let out = run(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn guard_exceeded_exits_four() {
    let dir = std::env::temp_dir().join("loja-cli-test-guard");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("n7.poly");
    std::fs::write(&path, "z1*z2*z3*z4*z5*z6*z7\n").unwrap();
    let out = run(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn config_file_is_honored() {
    let dir = std::env::temp_dir().join("loja-cli-test-cfg");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("loja.cfg");
    std::fs::write(&cfg, "max_n = 2\n").unwrap();
    let out = bin()
        .args(["bound", &sample("f1.poly")])
        .env("LOJA_CONFIG", cfg.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "tightened guard rejects n = 3");
}

#[test]
fn analyze_report_is_deterministic_and_schema_valid() {
    let dir = std::env::temp_dir().join("loja-cli-test-analyze");
    std::fs::create_dir_all(&dir).unwrap();
    let out1 = dir.join("report1.json");
    let out2 = dir.join("report2.json");
    for out_path in [&out1, &out2] {
        let out = run(&[
            "analyze",
            &sample("f1.poly"),
            "--json",
            out_path.to_str().unwrap(),
            "--budget",
            "12",
            "--samples",
            "4",
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        let text = stdout(&out);
        assert!(text.contains("bound (general): 10/11"));
        assert!(text.contains("bound (refined): 8/9"));
        assert!(text.contains("probe: theta >= 8/9 at weight (8,7,6)"));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "report bytes must be identical across runs");

    let report: Value = serde_json::from_slice(&a).unwrap();
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(repo_root().join("schema/loja-report-1.schema.json")).unwrap(),
    )
    .unwrap();
    let mut errors = Vec::new();
    validate(&schema, &schema, &report, "$", &mut errors);
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

// ---- minimal JSON-schema checker for the subset the schema file uses ----

fn validate(root: &Value, schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    let schema = match schema.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let key = r.trim_start_matches("#/definitions/");
            &root["definitions"][key]
        }
        None => schema,
    };
    if let Some(variants) = schema.get("oneOf").and_then(Value::as_array) {
        let ok = variants.iter().any(|v| {
            let mut errs = Vec::new();
            validate(root, v, value, path, &mut errs);
            errs.is_empty()
        });
        if !ok {
            errors.push(format!("{path}: no oneOf variant matched"));
        }
        return;
    }
    if let Some(c) = schema.get("const") {
        if c != value {
            errors.push(format!("{path}: expected const {c}"));
        }
        return;
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            errors.push(format!("{path}: {value} not in enum"));
        }
        return;
    }
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let actual = match value {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) if n.is_i64() || n.is_u64() => "integer",
            Value::Number(_) => "number",
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        let matches = types
            .iter()
            .any(|t| *t == actual || (*t == "number" && actual == "integer"));
        if !matches {
            errors.push(format!("{path}: type {actual} not among {types:?}"));
            return;
        }
    }
    if let Some(pattern) = schema.get("pattern").and_then(Value::as_str) {
        if let Value::String(s) = value {
            if !simple_hex_match(pattern, s) {
                errors.push(format!("{path}: {s:?} fails pattern {pattern}"));
            }
        }
    }
    if let Value::Object(obj) = value {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    errors.push(format!("{path}: missing required field {key:?}"));
                }
            }
        }
        if let Some(props) = schema.get("properties").and_then(Value::as_object) {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    validate(root, sub, v, &format!("{path}.{key}"), errors);
                }
            }
        }
    }
    if let (Value::Array(items), Some(sub)) = (value, schema.get("items")) {
        for (i, v) in items.iter().enumerate() {
            validate(root, sub, v, &format!("{path}[{i}]"), errors);
        }
    }
}

/// The only pattern in the schema is the 64-char hex hash.
fn simple_hex_match(pattern: &str, s: &str) -> bool {
    if pattern == "^[0-9a-f]{64}$" {
        s.len() == 64 && s.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase())
    } else {
        true
    }
}
