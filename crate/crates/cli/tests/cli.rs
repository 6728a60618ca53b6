use std::path::PathBuf;
use std::process::{Command, Output};

fn wassdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wassdeg")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = wassdeg(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wassdeg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ball_f_vectors() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["ball", "--metric", r#"{"type":"discrete","n":4}"#, "--format", "json"])).unwrap();
    assert_eq!(v["f_vector"], serde_json::json!([12, 24, 14]));
    assert!(stdout(&["ball", "--metric", r#"{"type":"l1","n":5}"#]).contains("[8, 24, 32, 16]"));
    assert!(stdout(&["ball", "--metric", r#"{"type":"discrete","n":2}"#]).contains("f-vector [2]"));
}

#[test]
fn invalid_metric_exits_with_two() {
    let out = wassdeg(&["ball", "--metric", r#"{"type":"explicit","d":[[0,1,5],[1,0,1],[5,1,0]]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d[0][2] > d[0][1] + d[1][2]"));
    assert_eq!(wassdeg(&["ball", "--metric", "nonsense"]).status.code(), Some(2));
}

#[test]
fn polar_methods() {
    let s = stdout(&["polar", "--model", r#"{"type":"hirzebruch","a":1,"b":2}"#, "--method", "formula", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["multidegree"]["delta"], serde_json::json!({"1": 3, "2": 4, "3": 3}));

    let s = stdout(&["polar", "--model", &fixture("quartic-curve.json"), "--method", "slicing", "--seed", "7"]);
    assert!(s.contains("6s^4t + 4s^3t^2"), "{s}");

    let s = stdout(&["polar", "--model", r#"{"type":"path4_binary"}"#, "--method", "fixture", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["method"], "fixture");
    assert_eq!(v["multidegree"]["delta"]["8"], 34);

    let out = wassdeg(&["polar", "--model", r#"{"type":"path4_binary"}"#, "--method", "formula"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn single_face_degree() {
    let s = stdout(&[
        "wdeg", "--model", &fixture("twisted-cubic.json"), "--metric", "discrete:4",
        "--face", "0,0,1,-1;1,0,0,-1", "--mu", "1/6,1/2,1/6,1/6", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["outcome"], "3");
    assert_eq!(v["face_dim"], 1);
}

#[test]
fn vertex_column_of_the_no_three_way_table() {
    let s = stdout(&[
        "wdeg", "--model", r#"{"type":"no3way","dims":[2,2,2]}"#, "--metric", "hamming:2,2,2",
        "--face-dim", "0", "--format", "csv",
    ]);
    assert_eq!(s, "# wassdeg degree-table v1\nface_dim,face_codim,outcome,count\n0,7,1,24\n");
}

#[test]
fn tables_are_reproducible_and_resumable() {
    let args = |out: &str, journal: Option<&str>, dims: &[&'static str]| -> Vec<String> {
        let mut a: Vec<String> = ["wdeg", "--model", r#"{"type":"hirzebruch","a":1,"b":2}"#, "--metric", "l1:5", "--seed", "3", "--format", "csv", "--out", out]
            .iter()
            .map(|s| s.to_string())
            .collect();
        if let Some(j) = journal {
            a.extend(["--journal".to_string(), j.to_string()]);
        }
        for d in dims {
            a.extend(["--face-dim".to_string(), d.to_string()]);
        }
        a
    };
    let run = |a: Vec<String>| {
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        stdout(&refs);
    };
    let (a, b, c) = (scratch("a.csv"), scratch("b.csv"), scratch("c.csv"));
    let journal = scratch("t.jsonl");
    let _ = std::fs::remove_file(&journal);
    run(args(a.to_str().unwrap(), None, &[]));
    run(args(b.to_str().unwrap(), None, &[]));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    // A partial run, then a full run resumed from its journal.
    run(args(c.to_str().unwrap(), Some(journal.to_str().unwrap()), &["1", "2"]));
    run(args(c.to_str().unwrap(), Some(journal.to_str().unwrap()), &[]));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
    let lines = std::fs::read_to_string(&journal).unwrap().lines().count();
    assert_eq!(lines, 1 + 8 + 24 + 32 + 16);
}

#[test]
fn distance_candidates() {
    let s = stdout(&[
        "solve", "--model", &fixture("twisted-cubic.json"), "--metric", "discrete:4",
        "--mu", "1/4,1/5,1/6,23/60", "--face-dim", "1", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    let lambda = v["lambda"].as_f64().unwrap();
    assert!((lambda - 0.268).abs() < 0.005, "{lambda}");

    let s = stdout(&["solve", "--model", &fixture("twisted-cubic.json"), "--metric", "discrete:4", "--mu", "1/8,3/8,3/8,1/8", "--face-dim", "0"]);
    assert!(s.contains("distance 0"), "{s}");

    let s = stdout(&["solve", "--metric", "discrete:3", "--mu", "1/2,1/2,0", "--nu", "0,1/2,1/2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["distance"], "1/2");

    let out = wassdeg(&["solve", "--model", &fixture("twisted-cubic.json"), "--metric", "discrete:4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn model_summary() {
    let s = stdout(&["model", "--model", r#"{"type":"no3way","dims":[2,2,3]}"#, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!((v["dim"].as_i64(), v["degree"].as_u64()), (Some(9), Some(12)));
    let out = wassdeg(&["wdeg", "--model", r#"{"type":"scroll","n":[1,2]}"#, "--metric", "discrete:4"]);
    assert_eq!(out.status.code(), Some(2));
}
