use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tracklab"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_classification_writes_a_clean_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&["verify", "classification", "--max-weight", "24", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_spattern_and_sweep_pass() {
    for suite in ["spattern", "sweep"] {
        let out = run(&["verify", suite, "--cases", "50", "--seed", "1"]);
        let text = String::from_utf8_lossy(&out.stdout);
        assert_eq!(out.status.code(), Some(0), "{text}");
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn classify_twelve_track() {
    let out = run(&["classify", fixture("twelve_track.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let class = &v["components"][0]["class"];
    assert_eq!((class["n"].as_u64(), class["a"].as_u64(), class["b"].as_u64()), (Some(3), Some(2), Some(1)));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    for args in [vec!["render", bad.to_str().unwrap()], vec!["pipeline", bad.to_str().unwrap(), "underlying"]] {
        assert_eq!(run(&args).status.code(), Some(2));
    }
    assert_eq!(run(&["render", "/nonexistent/x.json"]).status.code(), Some(2));
}

#[test]
fn render_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    let input = fixture("octagon.json");
    for p in [&a, &b] {
        let out = run(&["render", input.to_str().unwrap(), "-o", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with("<svg") && text.contains("panel0") && !text.contains("panel1"));
    // uv, wz, uw and vz are drawn twice; uz and vw once.
    assert_eq!(text.matches("<circle").count(), 14);
}

#[test]
fn render_spattern_has_two_panels() {
    let out = run(&["render", fixture("twelve_strack_with_link.json").to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("panel0") && text.contains("panel1"));
}

#[test]
fn render_empty_pattern_is_bare_net() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"version":1,"complex":"tetra","weights":{}}"#).unwrap();
    let out = run(&["render", empty.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["layout"]["edges"].as_array().unwrap().len(), 10);
    assert!(v["panels"][0]["points"].as_array().unwrap().is_empty());
}

#[test]
fn pipeline_underlying_uncross_matches_underlying() {
    let input = fixture("twelve_strack_with_link.json");
    let a = json(&run(&["pipeline", input.to_str().unwrap(), "underlying", "uncross"]));
    let b = json(&run(&["pipeline", input.to_str().unwrap(), "underlying"]));
    assert_eq!(a, b);
    assert!(a.get("weights").is_some());
}

#[test]
fn pipeline_remove_pair_on_octagon_gives_two_triangles() {
    let out = run(&["pipeline", fixture("octagon.json").to_str().unwrap(), "remove-pair", "classify", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert!(comps.iter().all(|c| c["class"]["type"] == "ThreeTrack"));
    let trace = String::from_utf8(out.stderr).unwrap();
    assert_eq!(trace.lines().count(), 2);
}

#[test]
fn pipeline_mismatch_exits_two() {
    let out = run(&["pipeline", fixture("octagon.json").to_str().unwrap(), "classify", "underlying"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("op 2"));
    let out = run(&["pipeline", fixture("octagon.json").to_str().unwrap(), "analyze"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_analyze_octagon_sweep() {
    let out = run(&["pipeline", fixture("octagon_sweep.json").to_str().unwrap(), "analyze"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["removable_pairs_in_piece"].as_array().unwrap().len(), 2);
    assert_eq!(v["almost_normal_after_uncross"], true);
}

#[test]
fn enumerate_reports_zero_violations() {
    let out = run(&["enumerate", "--max-weight", "16"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 violations"));
}
