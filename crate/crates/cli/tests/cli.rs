use std::process::{Command, Output};

fn wirenet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wirenet")).args(args).output().expect("spawn wirenet")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn validate_builtins() {
    for g in ["P", "D", "G", "honeycomb"] {
        let v = json(&wirenet(&["validate", "--graph", g, "--format", "json"]));
        assert_eq!(v["report"]["nondegenerate"], true, "{g}");
        assert_eq!(v["report"]["violations"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn bands_csv_header_and_rows() {
    let out = wirenet(&["bands", "--graph", "honeycomb", "--grid", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t_1,t_2,lambda_1,lambda_2,min_gap");
    assert_eq!(lines.len(), 1 + 16);
}

#[test]
fn bands_path_json() {
    let v = json(&wirenet(&["bands", "--graph", "G", "--path", "diag", "--samples", "11", "--format", "json"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 11);
    assert_eq!(v["eigenvalues"][0].as_array().unwrap().len(), 4);
}

#[test]
fn analyze_point_reports_projective_stabilizer() {
    let v = json(&wirenet(&["analyze-point", "--graph", "G", "--point", "1/4,1/4,1/4", "--format", "json"]));
    assert_eq!(v["stabilizer_order"], 12);
    assert_eq!(v["cocycle_trivial"], false);
    assert_eq!(v["trivializable"], false);
}

#[test]
fn cocycle_check_passes() {
    let v = json(&wirenet(&["cocycle-check", "--graph", "D", "--trials", "10", "--format", "json"]));
    assert_eq!(v["conjugation_passed"], 10);
    assert_eq!(v["spectrum_passed"], 10);
}

#[test]
fn table_output_is_text() {
    for cmd in [&["autos", "--graph", "honeycomb"][..], &["fixed-points", "--graph", "G"], &["analyze", "--graph", "P"]] {
        let out = wirenet(cmd);
        assert!(out.status.success(), "{cmd:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(wirenet(&["analyze-point", "--graph", "G", "--point", "1/2,1/2"]).status.code(), Some(2));
    assert_eq!(wirenet(&["validate", "--graph", "no-such-graph"]).status.code(), Some(2));
    assert_eq!(wirenet(&["bands", "--graph", "G"]).status.code(), Some(2));
    assert_eq!(wirenet(&["validate", "--graph", "G", "--out", "/nonexistent-dir/x.json"]).status.code(), Some(4));
}

#[test]
fn custom_graph_from_file() {
    let dir = std::env::temp_dir().join(format!("wirenet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("loop.json");
    let text = r#"{"name":"ring","rank":1,"vertices":["a"],"edges":[{"id":"l","from":"a","to":"a","weight":{"phase":[0,1],"exp":[1]}}]}"#;
    std::fs::write(&path, text).unwrap();
    let out = wirenet(&["validate", "--graph", path.to_str().unwrap(), "--format", "json"]);
    let _ = std::fs::remove_dir_all(&dir);
    let v = json(&out);
    assert_eq!(v["graph"], "ring");
}
