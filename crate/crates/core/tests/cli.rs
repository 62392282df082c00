use serde_json::Value;
use sigmafix::cli::{run, Output};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn sigmafix(args: &[&str]) -> Output {
    run(std::iter::once("sigmafix").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json", "--no-timestamp"];
    full.extend_from_slice(args);
    let out = sigmafix(&full);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

#[test]
fn abelianize_triangle() {
    let out = sigmafix(&["abelianize", &fixture("triangle.json")]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), "Z, a↦1 b↦1 c↦1");
}

#[test]
fn sigma1_descriptions() {
    let free = sigmafix(&["sigma1", &fixture("free2.json")]);
    assert_eq!(free.code, 0);
    assert!(free.stdout.starts_with("Σ^1 = empty"));
    let tri = sigmafix(&["sigma1", &fixture("triangle.json")]);
    assert!(tri.stdout.starts_with("Σ^1 = whole sphere {±1}"));
    assert!(tri.stdout.contains("[living-subgraph]"));
}

#[test]
fn sigma1_membership_of_a_class() {
    let d4 = fixture("dihedral4.json");
    let inside = sigmafix(&["sigma1", &d4, "--class", "1,1"]);
    assert!(inside.stdout.starts_with("Yes"), "{}", inside.stdout);
    let outside = sigmafix(&["sigma1", &d4, "--class", "1,-1"]);
    assert!(outside.stdout.starts_with("No"), "{}", outside.stdout);
}

#[test]
fn wrong_class_width_is_bad_input() {
    let out = sigmafix(&["sigma1", &fixture("triangle.json"), "--class", "1,-1"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("character rank 1"));
}

#[test]
fn fgfpa_without_automorphisms_is_unknown() {
    let out = sigmafix(&["fgfpa", &fixture("triangle.json"), &fixture("z.json")]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.starts_with("Unknown"));
}

#[test]
fn fgfpa_artin_witness() {
    let v = json(&[
        "fgfpa",
        &fixture("triangle.json"),
        &fixture("z.json"),
        "--psi",
        &fixture("triangle_swap.psi.json"),
    ]);
    assert_eq!(v["answer"], "No");
    assert_eq!(v["command"], "fgfpa");
    assert_eq!(v["witness"]["restricted"], serde_json::json!([1, 4]));
}

#[test]
fn fix_type_intro_json() {
    let v = json(&["fix-type", &fixture("intro.aut.json")]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["answer"], "No");
    assert!(v.get("generatedAt").is_none());
    let cites: Vec<&str> = v["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["citation"].as_str().unwrap().split(':').next().unwrap())
        .collect();
    assert_eq!(cites, ["Cor 5.3", "Thm 2.2(5)", "Thm 2.2(2)"]);
}

#[test]
fn json_is_deterministic_without_timestamp() {
    let args = ["--json", "--no-timestamp", "fix-type", &fixture("exa.aut.json")];
    let a = sigmafix(&args);
    let b = sigmafix(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timestamp_present_by_default() {
    let out = sigmafix(&["--json", "abelianize", &fixture("free2.json")]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v["generatedAt"].is_string());
}

#[test]
fn kernel_type_on_free_group() {
    let out = sigmafix(&["kernel-type", &fixture("free2.json"), "--class", "1,0"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("No"));
    assert!(out.stdout.contains("[kernel-discrete]"));
}

#[test]
fn oracle_subcommands() {
    let w = sigmafix(&["oracle", "free-witness", "--rank", "2", "--chi", "1,-2"]);
    assert_eq!(w.code, 0);
    assert!(w.stdout.starts_with("[χ] ∉ Σ¹(F2)"));
    let d = sigmafix(&["oracle", "dihedral", "--m", "4"]);
    assert!(d.stdout.contains("0 mismatches"));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(sigmafix(&["bogus"]).code, 1);
    assert_eq!(sigmafix(&["sigma1"]).code, 1);
    let missing = sigmafix(&["abelianize", "/nonexistent/group.json"]);
    assert_eq!(missing.code, 1);
    assert!(missing.stderr.starts_with("error: bad input"));
}

#[test]
fn malformed_descriptor_is_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, r#"{"schema": 1, "kind": "artin", "vertices": ["a"], "edges": [["a", "z", 3]]}"#).unwrap();
    let out = sigmafix(&["abelianize", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
}

#[test]
fn reproduce_paper_passes() {
    let out = sigmafix(&["reproduce-paper"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(out.stdout.lines().filter(|l| l.starts_with("PASS")).count(), 7);
}

#[test]
fn dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = sigmafix(&["reproduce-paper", "--dump", dir.path().to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let shipped = std::fs::read_to_string(fixture("../golden/intro.json")).unwrap();
    let fresh = std::fs::read_to_string(dir.path().join("intro.json")).unwrap();
    assert_eq!(shipped, fresh);
}
