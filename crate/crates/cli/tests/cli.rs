use cobar_core::sset::SSetPresentation;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobarkit")).args(args).output().expect("binary runs")
}

fn groups(out: &Output) -> Vec<String> {
    let v: Value = serde_json::from_slice(&out.stdout).expect("json output");
    v["homology"].as_array().unwrap().iter().map(|g| g.as_str().unwrap().to_string()).collect()
}

#[test]
fn json_round_trip_on_fixtures() {
    for name in ["circle.json", "sphere2.json", "triangle_boundary.json", "torus.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let x = SSetPresentation::from_json(&v).unwrap();
        assert_eq!(x.to_json(), v, "{name}");
        let y = SSetPresentation::from_json(&x.to_json()).unwrap();
        assert_eq!(y.to_json(), x.to_json(), "{name}");
    }
}

#[test]
fn homology_tables() {
    let cases: [(&str, &str, &[&str]); 3] =
        [("S2", "3", &["Z", "0", "Z", "0"]), ("point", "2", &["Z", "0", "0"]), ("S1", "2", &["Z", "Z", "0"])];
    for (space, dim, expect) in cases {
        let out = run(&["homology", space, "--dim", dim, "--format", "json"]);
        assert!(out.status.success());
        assert_eq!(groups(&out), expect);
    }
    let torus = fixture("torus.json");
    let out = run(&["homology", torus.to_str().unwrap(), "--dim", "2", "--format", "json"]);
    assert_eq!(groups(&out), ["Z", "Z^2", "Z"]);
    let out = run(&["homology", "S2", "--dim", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("H_2\tZ"));
}

#[test]
fn loop_homology_tables() {
    let out = run(&["loop-homology", "S2", "--method", "adams", "--deg", "4", "--format", "json"]);
    assert_eq!(groups(&out), ["Z"; 5]);
    let out = run(&["loop-homology", "S2", "--method", "kan", "--deg", "2", "--format", "json"]);
    assert_eq!(groups(&out), ["Z"; 3]);
    let s2 = fixture("sphere2.json");
    let out = run(&["loop-homology", s2.to_str().unwrap(), "--method", "kan", "--deg", "2", "--format", "json"]);
    assert_eq!(groups(&out), ["Z"; 3]);
    let out = run(&["loop-homology", "point", "--deg", "3", "--format", "json"]);
    assert_eq!(groups(&out), ["Z", "0", "0", "0"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["homology", "S2", "--dim", "3"]).status.code(), Some(0));
    assert_eq!(run(&["homology", fixture("bad_face.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["homology", "klein", "--dim", "1"]).status.code(), Some(2));
    let circle = fixture("circle.json");
    assert_eq!(run(&["homology", circle.to_str().unwrap(), "--dim", "2"]).status.code(), Some(3));
    let torus = fixture("torus.json");
    assert_eq!(run(&["loop-homology", torus.to_str().unwrap(), "--method", "kan", "--deg", "1"]).status.code(), Some(3));
    let tri = fixture("triangle_boundary.json");
    assert_eq!(run(&["loop-homology", tri.to_str().unwrap(), "--deg", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "ez-aw", "99"]).status.code(), Some(2));
    assert_ne!(run(&["verify", "no-such-suite"]).status.code(), Some(0));
}

#[test]
fn verify_examples_pass() {
    for (suite, size) in [("ez-aw", "5"), ("szczarba-cancel", "2"), ("shih", "4")] {
        let out = run(&["verify", suite, size]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(out.status.code(), Some(0), "{text}");
        assert!(text.lines().any(|l| l.starts_with("PASS")));
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn verify_reports_seed_and_is_deterministic() {
    let a = run(&["verify", "stasheff", "6", "--seed", "7", "--format", "json"]);
    let b = run(&["verify", "stasheff", "6", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["name"] == "mutated sign is detected"));
}
