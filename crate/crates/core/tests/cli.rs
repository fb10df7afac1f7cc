//! End-to-end tests of the command-line driver: exit codes partition the
//! verdicts, reports are valid JSON with stable hashes, and the
//! subcommands produce what they document.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(name)
}

fn pd3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pd3")).args(args).output().expect("binary runs")
}

fn check(file: &str) -> (i32, serde_json::Value) {
    let out = pd3(&["check", sample(file).to_str().unwrap()]);
    let json: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON for {file}: {e}"));
    (out.status.code().unwrap(), json)
}

#[test]
fn exit_codes_partition_verdicts() {
    let (code, json) = check("s3_z4.gog");
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "Realizable");
    let (code, json) = check("s3_z3_s3.gog");
    assert_eq!(code, 2);
    assert_eq!(json["verdict"], "Obstructed");
    let (code, json) = check("free_product.gog");
    assert_eq!(code, 3);
    assert_eq!(json["verdict"], "StructurallyInadmissible");
    let (code, json) = check("z6_edge.gog");
    assert_eq!(code, 4);
    assert_eq!(json["verdict"], "Unknown");
    let (code, _) = check("q8_q8.gog");
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_one() {
    let out = pd3(&["check", "/nonexistent/input.gog"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    // a parse error also exits 1 with a position
    let dir = std::env::temp_dir().join("pd3-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.gog");
    std::fs::write(&bad, "group A = cyclic(2)\nwhat is this\n").unwrap();
    let out = pd3(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("2:"), "position missing: {stderr}");
}

#[test]
fn reports_are_deterministic() {
    let a = pd3(&["check", sample("s3_s3.gog").to_str().unwrap()]);
    let b = pd3(&["check", sample("s3_s3.gog").to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["input_sha256"].as_str().unwrap().len(), 64);
    // the canonicalized echo reparses to the same canonical form
    let echo = json["input"].as_str().unwrap();
    let reparsed = pd3::dsl::render_gog(&pd3::dsl::parse_gog(echo).unwrap());
    assert_eq!(echo, reparsed);
}

#[test]
fn realize_prints_chain_and_h3() {
    let out = pd3(&["realize", sample("s3_s3.gog").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("3 1-cells, 3 2-cells"), "{text}");
    assert!(text.contains("self-conjugate"));
    assert!(text.contains("H3 = [2, 3, 3]"));
    // chain JSON is embedded in the json format
    let out = pd3(&["realize", sample("s3_z4.gog").to_str().unwrap(), "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["chain"]["ranks"], serde_json::json!([1, 2, 2, 1]));
    // no chain for the catalog manifolds, but still exit 0
    let out = pd3(&["realize", sample("circle_rp2.gog").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no chain certificate"));
}

#[test]
fn fox_and_push() {
    let out = pd3(&["fox", sample("s3_z4.gog").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("presentation:"), "{text}");
    let out = pd3(&["fox", sample("circle_rp2.gog").to_str().unwrap(), "--push", "w"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[1 + a, 0]"), "{text}");
    assert!(text.contains("[0, 1 - a]"), "{text}");
    // explicit push spec
    let out = pd3(&["fox", sample("s3_s3.gog").to_str().unwrap(), "--push", "2: B.a=1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn h3_tuples_from_cli() {
    let out = pd3(&["h3", sample("s3_s3.gog").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["tuple"], serde_json::json!([2, 3, 3]));
    assert_eq!(json["cyclic_product"], serde_json::Value::Null);
    let out = pd3(&["h3", sample("s3_z4.gog").to_str().unwrap()]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["cyclic_product"], serde_json::json!(12));
}

#[test]
fn enumerate_emits_documents_that_reparse() {
    let out = pd3(&["enumerate", "--max-vertices", "2", "--max-order", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 3, "only {} documents", lines.len());
    let mut seen_mixed = false;
    for line in &lines {
        let json: serde_json::Value = serde_json::from_str(line).unwrap();
        let doc = json["document"].as_str().unwrap();
        let parsed = pd3::dsl::parse_gog(doc).unwrap();
        let (graph, w) = pd3::dsl::resolve(&parsed).unwrap();
        assert!(pd3::gog::validate_and_reduce(&graph, &w).is_ok());
        if json["vertices"] == serde_json::json!(["dihedral(6)", "cyclic(4)"]) {
            seen_mixed = true;
        }
    }
    assert!(seen_mixed, "expected the dihedral(6)/cyclic(4) tree");
    // bounds errors exit 1
    let out = pd3(&["enumerate", "--max-vertices", "10", "--max-order", "8"]);
    assert_eq!(out.status.code(), Some(1));
}
