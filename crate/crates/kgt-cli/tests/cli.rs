//! End-to-end checks against the compiled binary: pipelines, exit-code
//! conventions, and byte-for-byte determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn kgt(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kgt"));
    cmd.args(args);
    cmd.stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("binary exits")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn examples_revalidate() {
    for args in [
        vec!["example", "bd", "--levels", "3"],
        vec!["example", "cycle", "--p", "5"],
        vec!["example", "twoloop"],
    ] {
        let spec = kgt(&args, None);
        assert!(spec.status.success());
        let validated = kgt(&["validate", "-"], Some(&stdout_of(&spec)));
        assert!(validated.status.success(), "{:?}", validated);
    }
}

#[test]
fn skew_pipeline_counts_vertices() {
    let spec = stdout_of(&kgt(&["example", "bd", "--levels", "3"], None));
    let skewed = kgt(&["skew", "-", "--level", "3"], Some(&spec));
    assert!(skewed.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&skewed)).unwrap();
    assert_eq!(parsed["graph"]["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn simplicity_exit_codes() {
    let bd = stdout_of(&kgt(&["example", "bd", "--levels", "4"], None));
    let out = kgt(&["simplicity", "-", "--bound", "2"], Some(&bd));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["verdict"], "Simple");
    assert!(report["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().contains("segment form")));

    // a cycle with the trivial chain has periodic shifts nothing separates
    let cycle = stdout_of(&kgt(&["example", "cycle", "--p", "2"], None));
    let out = kgt(&["simplicity", "-"], Some(&cycle));
    assert_eq!(out.status.code(), Some(1), "{out:?}");

    let twoloop = stdout_of(&kgt(&["example", "twoloop"], None));
    let out = kgt(&["simplicity", "-"], Some(&twoloop));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn tower_reports_level_counts() {
    let bd = stdout_of(&kgt(&["example", "bd", "--levels", "4"], None));
    let out = kgt(&["tower", "-", "--levels", "4"], Some(&bd));
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(
        report["vertices_per_level"],
        serde_json::json!([1, 2, 4, 8])
    );
}

#[test]
fn cover_check_emits_the_fiber_maps() {
    let bd = stdout_of(&kgt(&["example", "bd", "--levels", "3"], None));
    let out = kgt(&["cover-check", "-", "--level", "2"], Some(&bd));
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["vertex_map"]["v|3"], "v|1");
}

#[test]
fn projlim_counts_and_bijection() {
    let bd = stdout_of(&kgt(&["example", "bd", "--levels", "3"], None));
    let out = kgt(
        &["projlim", "-", "--levels", "3", "--degree", "1"],
        Some(&bd),
    );
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["count"], 4);
    assert_eq!(report["bijection"]["bijective"], true);
}

#[test]
fn symbolic_checks_pass() {
    let bd = stdout_of(&kgt(&["example", "bd", "--levels", "3"], None));
    let out = kgt(&["symbolic", "-"], Some(&bd));
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(reports
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"] == true));
}

#[test]
fn output_is_deterministic() {
    let bd = stdout_of(&kgt(&["example", "bd", "--levels", "4"], None));
    for args in [
        vec!["validate", "-"],
        vec!["skew", "-", "--level", "3"],
        vec!["tower", "-", "--levels", "3"],
        vec!["simplicity", "-"],
        vec!["projlim", "-", "--levels", "2", "--degree", "1"],
        vec!["symbolic", "-"],
    ] {
        let a = kgt(&args, Some(&bd));
        let b = kgt(&args, Some(&bd));
        assert_eq!(
            stdout_of(&a),
            stdout_of(&b),
            "nondeterministic output for {args:?}"
        );
        assert!(!stdout_of(&a).is_empty());
    }
    assert_eq!(
        stdout_of(&kgt(&["example", "bd", "--levels", "4"], None)),
        stdout_of(&kgt(&["example", "bd", "--levels", "4"], None))
    );
}

#[test]
fn errors_are_machine_readable() {
    let broken = r#"{"graph": {"k": 2, "vertices": ["v"], "edges": [
        {"id": "a", "color": 1, "src": "v", "dst": "v"},
        {"id": "b", "color": 2, "src": "v", "dst": "v"}
    ], "squares": []}}"#;
    let out = kgt(&["validate", "-"], Some(broken));
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr.clone()).unwrap().trim()).unwrap();
    assert_eq!(err["error"]["kind"], "MissingSquare");
}

#[test]
fn table_groups_parse_through_the_spec_format() {
    // a nonabelian table group exercises the non-cyclic arm of the schema
    let cc = kgt::presets::s3_square_chain();
    let spec = kgt::specfile::SpecFile::from_parts(cc.graph(), Some(&cc), None).to_json();
    let validated = kgt(&["validate", "-"], Some(&spec));
    assert!(validated.status.success(), "{validated:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&validated)).unwrap();
    assert_eq!(
        report["chain"]["group_orders"],
        serde_json::json!([1, 2, 6])
    );
    let symbolic = kgt(&["symbolic", "-"], Some(&spec));
    assert_eq!(symbolic.status.code(), Some(0), "{symbolic:?}");
    // truncation to fewer levels still passes
    let symbolic = kgt(&["symbolic", "-", "--levels", "2"], Some(&spec));
    assert_eq!(symbolic.status.code(), Some(0), "{symbolic:?}");
}

#[test]
fn enumeration_cap_is_enforced() {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kgt"));
    cmd.args(["projlim", "-", "--levels", "3", "--degree", "2"]);
    cmd.env("KGT_MAX_PATHS", "1");
    cmd.stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    let bd = stdout_of(&kgt(&["example", "bd", "--levels", "3"], None));
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(bd.as_bytes())
        .unwrap();
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr.clone()).unwrap().trim()).unwrap();
    assert_eq!(err["error"]["kind"], "EnumerationCapExceeded");
}

#[test]
fn dot_export_writes_clusters() {
    let dir = std::env::temp_dir().join(format!("kgt-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot_path = dir.join("tower.dot");
    let bd = stdout_of(&kgt(&["example", "bd", "--levels", "3"], None));
    let out = kgt(
        &[
            "tower",
            "-",
            "--levels",
            "3",
            "--dot",
            dot_path.to_str().unwrap(),
        ],
        Some(&bd),
    );
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.contains("cluster_level_3"));
    std::fs::remove_dir_all(&dir).ok();
}
