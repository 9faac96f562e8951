use std::process::{Command, Output};

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).env_remove("WORKBENCH_CACHE").output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

const HALVES: &str = r#"[{"unit":0,"exp_x2":-1},{"unit":0,"exp_x2":1}]"#;
const INTEGRAL3: &str = r#"[{"unit":0,"exp_x2":0},{"unit":0,"exp_x2":2},{"unit":0,"exp_x2":4}]"#;

#[test]
fn enumerate_rank_two() {
    let out = hecke(&["enumerate", "--lambda", HALVES]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["segments"][0], serde_json::json!({"unit": 0, "start_x2": -1, "len": 2}));
}

#[test]
fn enumerate_rank_one_and_twisted_labels() {
    let out = hecke(&["enumerate", "--lambda", r#"[{"unit":0,"exp_x2":0}]"#]);
    assert_eq!(json(&out).as_array().unwrap().len(), 1);
    let out = hecke(&["enumerate", "--twisted", "--lambda", HALVES]);
    let v = json(&out);
    let rhos: Vec<&str> = v.as_array().unwrap().iter().map(|p| p["rho"].as_str().unwrap()).collect();
    assert_eq!(rhos, ["trivial", "sign", "trivial", "sign"]);
}

#[test]
fn table_rank_two_json_and_csv() {
    let out = hecke(&["table", "--lambda", HALVES]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["matrix"], serde_json::json!([[1, 0], [1, 1]]));
    assert_eq!(v["order"], "closure");
    let out = hecke(&["table", "--lambda", HALVES, "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(2).unwrap().ends_with(",1,1"));
}

#[test]
fn table_integral_rank_three_is_four_by_four() {
    let out = hecke(&["table", "--lambda", INTEGRAL3]);
    let m = json(&out)["matrix"].as_array().unwrap().clone();
    assert_eq!(m.len(), 4);
    assert!(m.iter().all(|r| r.as_array().unwrap().len() == 4));
}

#[test]
fn output_is_byte_stable() {
    let a = hecke(&["twisted-table", "--lambda", HALVES]);
    let b = hecke(&["twisted-table", "--lambda", HALVES]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lambda_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lambda.json");
    std::fs::write(&path, HALVES).unwrap();
    let out = hecke(&["table", "--lambda", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(hecke(&["table", "--lambda", "[{\"unit\":0}"]).status.code(), Some(2));
    assert_eq!(hecke(&["table", "--lambda", HALVES, "--q", "1"]).status.code(), Some(2));
    assert_eq!(hecke(&["table", "--lambda", HALVES, "--n", "3"]).status.code(), Some(2));
    assert_eq!(hecke(&["table", "--lambda", HALVES, "--modulus", "3"]).status.code(), Some(2));
    assert_eq!(hecke(&["bogus"]).status.code(), Some(2));
}

#[test]
fn unvalidated_recipe_exits_three() {
    let lambda: Vec<String> = [0, 2, 4, 6, 8].iter().map(|e| format!(r#"{{"unit":0,"exp_x2":{e}}}"#)).collect();
    let out = hecke(&["table", "--lambda", &format!("[{}]", lambda.join(","))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("kl.json");
    let lambda: Vec<String> = [0, 0, 2, 2].iter().map(|e| format!(r#"{{"unit":0,"exp_x2":{e}}}"#)).collect();
    let lambda = format!("[{}]", lambda.join(","));
    let first = hecke(&["table", "--lambda", &lambda, "--cache", cache.to_str().unwrap()]);
    assert!(first.status.success());
    assert!(cache.exists());
    std::fs::write(&cache, "{\"version\":1,\"validated\":[],\"entries\":{\"4:2,1,4,3:4,2,3,1\":[7]},\"checksum\":\"00\"}").unwrap();
    let second = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["table", "--lambda", &lambda])
        .env("WORKBENCH_CACHE", &cache)
        .output()
        .unwrap();
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("discarded"));
}

#[test]
fn verify_algebra_scope_passes() {
    let out = hecke(&["verify", "algebra"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn whittaker_check_rank_two() {
    let out = hecke(&["whittaker-check", "--n", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["comparisons"].as_array().unwrap().iter().all(|c| c["verdict"] == "EQUAL"));
}
