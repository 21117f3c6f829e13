use std::path::PathBuf;
use std::process::{Command, Output};

fn varlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varlp")).args(args).output().expect("run varlp")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("varlp-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn report_without_timestamp(path: &PathBuf) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn verify_writes_reports_and_is_deterministic() {
    let a = scratch("a");
    let b = scratch("b");
    for dir in [&a, &b] {
        let out = varlp(&["verify", "--suite", "maximal", "--out", dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let csv = std::fs::read_to_string(a.join("maximal.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "check_id,paper_ref,statistic,bound,polarity,pass,runtime_ms");
    assert!(csv.lines().count() > 1);
    let ja = report_without_timestamp(&a.join("maximal.json"));
    assert_eq!(ja["suite"], "maximal");
    assert_eq!(ja["failed"], 0);
    assert_eq!(ja, report_without_timestamp(&b.join("maximal.json")));
    let _ = std::fs::remove_dir_all(&a);
    let _ = std::fs::remove_dir_all(&b);
}

#[test]
fn failing_suite_exits_one() {
    let dir = scratch("geometry");
    let out = varlp(&["verify", "--suite", "geometry", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn usage_errors_exit_two() {
    let dir = scratch("unknown");
    assert_eq!(varlp(&["verify", "--suite", "no-such-suite", "--out", dir.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(varlp(&["norm", "--func", "wave:1"]).status.code(), Some(2));
    assert_eq!(varlp(&["constant", "--class", "classical"]).status.code(), Some(2));
    assert_eq!(varlp(&["verify", "--suite", "maximal", "--config", "/nonexistent/config.toml"]).status.code(), Some(2));
}

#[test]
fn suites_lists_every_suite() {
    let out = varlp(&["suites"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for s in ["geometry", "measure", "norms", "classes", "duality", "maximal", "regularization", "factorization", "extrapolation"] {
        assert!(text.contains(&format!("\"{s}\"")), "missing {s}");
    }
}

#[test]
fn norm_of_a_constant_on_the_unit_weight() {
    let out = varlp(&["norm", "--func", "const:1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let n = v["norm"].as_f64().unwrap();
    assert!(n > 0.0 && n.is_finite());
    assert!((v["modular_at_norm"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}
