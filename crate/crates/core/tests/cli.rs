use std::process::{Command, Output};

use orbifrob::orbigw::{tabulated_potential, GWPotential};
use serde_json::{json, Value};

fn orbifrob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbifrob")).arg("--no-cache").args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn classify_example() {
    let o = orbifrob(&["classify", "2", "3", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), json!({"polynomial": true, "family": "E"}));
    assert_eq!(stdout_json(&orbifrob(&["classify", "2", "3", "6"])), json!({"polynomial": false, "family": "none"}));
}

#[test]
fn hurwitz_example() {
    let o = orbifrob(&["hurwitz", "--base-genus", "0", "--genus", "0", "-d", "2", "--profiles", "(2);(2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), json!({"value": "1/2"}));
    let o = orbifrob(&["hurwitz", "--genus", "1", "-d", "3", "--profiles", "(3);(3);(2,1);(2,1)", "--oracle"]);
    assert_eq!(stdout_json(&o)["agree"], json!(true));
}

#[test]
fn wdvv_example_and_failure_code() {
    let o = orbifrob(&["wdvv-check", "--orbifold", "2,2,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["nonzero_residuals"], json!(0));
    let o = orbifrob(&["wdvv-check", "--orbifold", "2,2,2", "--as-printed"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout_json(&o)["nonzero_residuals"].as_u64().unwrap() > 0);
}

#[test]
fn usage_and_resource_errors_are_json() {
    for (args, code, kind) in [
        (vec!["frobnicate"], 2, "usage"),
        (vec!["hurwitz", "--genus", "0", "-d", "2", "--profiles", "(3)"], 2, "invalid"),
        (vec!["tripoly", "--space", "3,3,3"], 2, "invalid"),
        (vec!["--max-degree", "4", "hurwitz", "--genus", "0", "-d", "6", "--profiles", "(6);(6)"], 3, "resource"),
    ] {
        let o = orbifrob(&args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert!(o.stdout.is_empty());
        let err: Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(err["error"]["kind"], json!(kind), "{args:?}");
    }
    assert_eq!(orbifrob(&["--help"]).status.code(), Some(0));
}

#[test]
fn potential_round_trip_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let o = orbifrob(&["gw-potential", "--orbifold", "2,2,4", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["matches_fixture"], json!(true));
    let f = GWPotential::from_json(&v).unwrap();
    assert_eq!(f, tabulated_potential(&[2, 2, 4]).unwrap());
    assert_eq!(GWPotential::from_json(&f.to_json()).unwrap(), f);
    let o = orbifrob(&["wdvv-check", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["tripoly", "--space", "2,2,3", "--a", "1", "--b", "2", "--c", "0,1/2,0", "--e", "2"];
    let a = orbifrob(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, orbifrob(&args).stdout);
    let v = stdout_json(&a);
    assert_eq!(v["space"], json!([2, 2, 3]));
    let ev = v["u_spectrum"].as_array().unwrap();
    assert_eq!(ev.len(), 6);
    let re: Vec<f64> = ev.iter().map(|z| z["re"].as_f64().unwrap()).collect();
    assert!(re.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn orbifold_and_tripoly_spectra_agree_from_the_command_line() {
    let o = orbifrob(&["u-spectrum", "--orbifold", "2,2,3", "--q", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["eigenvalues"].as_array().unwrap().len(), 6);
    let m = orbifrob(&["mirror-check", "--family", "2,2,3"]);
    assert_eq!(m.status.code(), Some(0), "{}", String::from_utf8_lossy(&m.stdout));
    assert_eq!(stdout_json(&m)["passed"], json!(true));
}

#[test]
fn seifert_and_cap_verbs() {
    let o = orbifrob(&["seifert", "--orders", "2,2,2", "--betas", "1,1,1", "--b", "0", "-K", "3", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["c1"], json!("3/2"));
    assert_eq!(v["K"], json!(3));
    assert_eq!(v["check"]["passed"], json!(true));
    let o = orbifrob(&["seifert", "--c", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["bundle"]["b"], json!(1));
    let o = orbifrob(&["cap", "--alpha", "4", "--mode", "solve"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["matches_fixture"], json!(true));
}

#[test]
fn config_and_env_cache() {
    let dir = tempfile::tempdir().unwrap();
    let from_env = dir.path().join("env.jsonl");
    let from_cfg = dir.path().join("cfg.jsonl");
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, json!({"cache": from_cfg}).to_string()).unwrap();
    let args = ["--config", cfg.to_str().unwrap(), "hurwitz", "--genus", "0", "-d", "3", "--profiles", "(3);(3)"];
    let run = |env: Option<&std::path::Path>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_orbifrob"));
        c.args(args).env_remove("ORBIFROB_CACHE");
        if let Some(p) = env {
            c.env("ORBIFROB_CACHE", p);
        }
        c.output().unwrap()
    };
    assert_eq!(run(None).status.code(), Some(0));
    assert!(from_cfg.exists() && !from_env.exists());
    assert_eq!(run(Some(&from_env)).status.code(), Some(0));
    assert!(from_env.exists());
    std::fs::write(&cfg, "{\"bogus\": 1}").unwrap();
    assert_eq!(run(None).status.code(), Some(2));
}

#[test]
fn fixtures_verb_lists_and_filters() {
    let o = orbifrob(&["fixtures", "--list"]);
    assert_eq!(stdout_json(&o).as_array().unwrap().len(), 9);
    let o = orbifrob(&["fixtures", "--only", "4,5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}
