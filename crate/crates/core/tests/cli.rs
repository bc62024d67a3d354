use std::process::Command;

use mpres::cli::{batch, run, Outcome};
use serde_json::{json, Value};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("mpres").chain(args.iter().copied()))
}

fn json_out(args: &[&str]) -> Value {
    let out = cli(args);
    assert_eq!(out.code, 0, "{out:?}");
    serde_json::from_str(&out.stdout).expect("JSON output")
}

#[test]
fn cubic_symbol_json() {
    let v = json_out(&["cubic-symbol", "--p1", "17", "--p2", "53", "--p3", "71", "--json"]);
    assert_eq!(v["symbol"], "zeta3^2");
    assert_eq!(v["exponent"], 2);
    assert_eq!(v["m"], 3);
    assert_eq!(v["input"]["bound"], mpres::cubic::DEFAULT_ALPHA_BOUND);
}

#[test]
fn cubic_symbol_certificate_replays() {
    let v = json_out(&["cubic-symbol", "--p1", "17", "--p2", "53", "--p3", "89", "--json", "--emit-certificate"]);
    let cert: mpres::cubic::ThetaCertificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert!(cert.verify());
    assert_eq!(cert.alpha.x.to_string(), "8");
    assert_eq!(cert.alpha.y.to_string(), "3");
    assert_eq!(v["symbol"], "zeta3");
}

#[test]
fn text_outputs() {
    assert_eq!(cli(&["legendre", "--a", "2", "--p", "7"]).stdout, "1\n");
    assert_eq!(cli(&["legendre", "--a", "-1", "--p", "7"]).stdout, "-1\n");
    assert_eq!(cli(&["redei", "--p1", "13", "--p2", "17", "--p3", "53"]).stdout, "-1\n");
    assert_eq!(cli(&["normalize", "--p", "17"]).stdout, "-17\n");
    assert_eq!(cli(&["magnus", "--word", "[x2,x1]", "--index", "12", "--m", "3"]).stdout, "2\n");
    assert_eq!(cli(&["magnus", "--word", "[x2,x1]", "--index", "1,2", "--m", "3", "--fox"]).stdout, "2\n");
}

#[test]
fn magnus_expansion_lists_terms() {
    let v = json_out(&["magnus", "--word", "x1 x2", "--m", "5", "--degree", "2", "--json"]);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 4);
    assert!(terms.contains(&json!({"index": [1, 2], "coefficient": 1})));
    assert!(!terms.iter().any(|t| t["index"] == json!([2, 1])));
}

#[test]
fn milnor_inline_presentation() {
    let pres = r#"{"l":3,"m":3,"norms":[19,19,19],"y":["1","1","[x2,x1]"],"S":[1,2,3]}"#;
    let v = json_out(&["milnor", "--presentation", pres, "--index", "123", "--json"]);
    assert_eq!(v["value"], 2);
    assert_eq!(v["delta"], 0);
    assert_eq!(v["tuple_symbol"]["exponent"], 2);
}

#[test]
fn verify_reports_every_item() {
    let out = cli(&["verify-paper"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().filter(|l| l.starts_with("PASS")).count(), 7);
    let v = json_out(&["verify-paper", "--json"]);
    assert_eq!(v["passed"], 7);
}

#[test]
fn exit_codes() {
    let out = cli(&["cubic-symbol", "--p1", "17"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["legendre", "--a", "x", "--p", "7"]).code, 2);

    let out = cli(&["cubic-symbol", "--p1", "17", "--p2", "17", "--p3", "71", "--json"]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "NotAdmissible");

    let out = cli(&["cubic-symbol", "--p1", "17", "--p2", "53", "--p3", "19"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error:"));

    let out = cli(&["legendre", "--a", "3", "--p", "9", "--json"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("InvalidModulus"));

    let out = cli(&["cubic-symbol", "--p1", "17", "--p2", "53", "--p3", "71", "--bound", "5", "--json"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("BoundExceeded"));
}

#[test]
fn batch_matches_single_commands_in_order() {
    let lines: Vec<String> = [71, 89, 107, 179, 197]
        .iter()
        .map(|p| json!({"cmd": "cubic-symbol", "p1": 17, "p2": 53, "p3": p}).to_string())
        .collect();
    let (out, ok) = batch(&lines.join("\n"));
    assert!(ok);
    let exps: Vec<u64> = out.iter().map(|v| v["exponent"].as_u64().unwrap()).collect();
    assert_eq!(exps, [2, 1, 2, 1, 1]);
    let p3s: Vec<&str> = out.iter().map(|v| v["input"]["p3"].as_str().unwrap()).collect();
    assert_eq!(p3s, ["71", "89", "107", "179", "197"]);
}

#[test]
fn batch_isolates_bad_lines() {
    let text = "{\"cmd\":\"legendre\",\"a\":2,\"p\":7}\n{oops\n{\"cmd\":\"legendre\",\"a\":3,\"p\":7}\n{\"cmd\":\"batch\",\"input\":\"x\"}\n";
    let (out, ok) = batch(text);
    assert!(!ok);
    assert_eq!(out.len(), 4);
    assert_eq!(out[0]["symbol"], 1);
    assert_eq!(out[1]["error"]["kind"], "Usage");
    assert_eq!(out[2]["symbol"], -1);
    assert_eq!(out[3]["error"]["kind"], "Usage");
}

#[test]
fn batch_empty_input() {
    let (out, ok) = batch("");
    assert!(out.is_empty() && ok);
}

#[test]
fn batch_file_through_cli() {
    let dir = std::env::temp_dir().join(format!("mpres-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    let out = cli(&["batch", "--input", empty.to_str().unwrap()]);
    assert_eq!((out.code, out.stdout.as_str()), (0, ""));
    let mixed = dir.join("mixed.jsonl");
    std::fs::write(&mixed, "{\"cmd\":\"normalize\",\"p\":\"53\"}\nnot json\n").unwrap();
    let out = cli(&["batch", "--input", mixed.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    let lines: Vec<Value> = out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["pi"], "-53");
    assert!(lines[1]["error"].is_object());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_round_trips() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["cubic-symbol", "--p1", "17", "--p2", "53", "--p3", "107", "--emit-certificate"],
        vec!["redei", "--p1", "13", "--p2", "17", "--p3", "53"],
        vec!["legendre", "--a", "5", "--p", "11"],
        vec!["normalize", "--p", "-5-3*w"],
        vec!["character", "--a", "2", "--p", "7"],
        vec!["magnus", "--word", "[x1,x2]^2 x3", "--index", "1,2", "--m", "9"],
        vec!["magnus", "--word", "x1^2 x2", "--m", "3"],
        vec!["milnor", "--presentation", r#"{"l":3,"m":3,"norms":[19,19,19],"y":["1","1","[x1,x2]"],"S":[1,2,3]}"#, "--index", "1,2,3"],
    ];
    for args in cases {
        let mut argv = args.clone();
        argv.push("--json");
        let first = json_out(&argv);
        let (again, ok) = batch(&first["input"].to_string());
        assert!(ok, "{args:?}: {again:?}");
        assert_eq!(again[0], first, "{args:?}");
    }
}

#[test]
fn binary_honours_bound_env() {
    let bin = env!("CARGO_BIN_EXE_mpres");
    let args = ["cubic-symbol", "--p1", "17", "--p2", "53", "--p3", "71", "--json"];
    let out = Command::new(bin).args(args).env("MS_DEFAULT_BOUND", "5").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("BoundExceeded"));
    let out = Command::new(bin).args(args).env("MS_DEFAULT_BOUND", "8").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["input"]["bound"], 8);
    let out = Command::new(bin).args(args).env("MS_DEFAULT_BOUND", "lots").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
