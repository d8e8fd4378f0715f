use std::fs;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_branchcones"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn lr_with_verify_agrees() {
    let out = run(&["lr", "--rank", "2", "--lambda", "1,1", "--beta", "1,1", "--mu", "1,1", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!({"count": 2, "oracle": 2, "agree": true}));
}

#[test]
fn dim_of_adjoint() {
    let out = run(&["dim", "--rank", "2", "--lambda", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!({"count": 8}));
    let out = run(&["dim", "--rank", "2", "--lambda", "1,0", "--word", "2,1,2"]);
    assert_eq!(stdout_json(&out), json!({"count": 3}));
}

#[test]
fn output_is_byte_stable() {
    let args = ["branch", "--rank", "3", "--subset", "1,2", "--lambda", "1,1,1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let threaded = run(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.stdout, threaded.stdout);
}

#[test]
fn bad_input_exits_2() {
    let out = run(&["dim", "--rank", "2", "--lambda", "1,x"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "usage");

    let out = run(&["dim", "--rank", "2", "--lambda", "1,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["error"]["message"].is_string());

    let out = run(&["dim", "--rank", "2", "--lambda", "1,0", "--threads", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn point_cap_exits_3() {
    let out = bin()
        .args(["dim", "--rank", "2", "--lambda", "3,3"])
        .env("BRANCHCONES_POINT_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["kind"], "resource-limit");
}

#[test]
fn verify_disagreement_exits_4() {
    let args = ["lr", "--rank", "2", "--lambda", "2,1", "--beta", "1,2", "--mu", "2,2", "--lambda-bound", "lower"];
    let plain = run(&args);
    assert_eq!(plain.status.code(), Some(0));
    let checked = run(&[&args[..], &["--verify"]].concat());
    assert_eq!(checked.status.code(), Some(4));
    assert_eq!(stdout_json(&checked)["agree"], false);
    assert_eq!(stderr_json(&checked)["error"]["kind"], "verify-failed");
}

#[test]
fn cone_export_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let ine = dir.path().join("c3.ine");
    let out = run(&["cone-export", "--kind", "c3", "--rank", "2", "--out", ine.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let meta = stdout_json(&out);
    let text = fs::read_to_string(&ine).unwrap();
    let mut lines = text.lines();
    let header: Vec<usize> = lines.next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect();
    let rows = meta["inequalities"].as_u64().unwrap() + 2 * meta["equalities"].as_u64().unwrap();
    assert_eq!(header, vec![rows as usize, meta["dimension"].as_u64().unwrap() as usize + 1]);
    for line in lines {
        assert_eq!(line.split_whitespace().count(), header[1]);
        assert!(line.split_whitespace().all(|x| x.parse::<i64>().is_ok()));
    }
    let sidecar: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c3.json")).unwrap()).unwrap();
    assert!(sidecar.is_object());
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["dim", "--rank", "1", "--lambda", "4", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v, json!({"count": 5}));
}

#[test]
fn job_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    fs::write(
        &job,
        r#"{"command":"lr","args":{"rank":2,"lambda":[1,1],"beta":[1,1],"mu":[1,1],"word":"default"},"verify":true}"#,
    )
    .unwrap();
    let out = run(&["run", "--job", job.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let direct = run(&["lr", "--rank", "2", "--lambda", "1,1", "--beta", "1,1", "--mu", "1,1", "--verify"]);
    assert_eq!(out.stdout, direct.stdout);
}

#[test]
fn job_file_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    for text in [
        r#"{"command":"dim","args":{"rank":2,"lambda":[1,0],"extra":1}}"#,
        r#"{"command":"dim","args":{"rank":2,"lambda":[1,0]},"colour":"red"}"#,
        r#"{"command":"frobnicate"}"#,
    ] {
        fs::write(&job, text).unwrap();
        let out = run(&["run", "--job", job.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert_eq!(stderr_json(&out)["error"]["kind"], "usage");
    }
}

#[test]
fn job_variant_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    fs::write(
        &job,
        r#"{"command":"lr","args":{"rank":2,"lambda":[2,1],"beta":[1,2],"mu":[2,2]},"variant":{"lambda-bound":"lower"},"verify":true}"#,
    )
    .unwrap();
    let out = run(&["run", "--job", job.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn maps_check_passes() {
    let out = run(&["maps-check", "--seed", "7", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], true);
    assert!(v["face"]["checked"].as_u64().unwrap() > 0);
}

#[test]
fn invariant_cone_and_quilts_agree() {
    let out = run(&[
        "invariant", "--rank", "2", "--tree", "0-4,1-4,4-5,2-5,3-5", "--leaf", "1,1", "--leaf", "1,1", "--leaf", "1,1",
        "--leaf", "1,1", "--method", "both", "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!({"cone": 8, "quilts": 8, "oracle": 8, "agree": true}));
}

#[test]
fn bz_lists_fillings() {
    let out = run(&["bz", "--m", "3", "--l1", "1,1", "--l2", "1,1", "--l3", "1,1", "--list", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["count"], 2);
    assert_eq!(v["fillings"].as_array().unwrap().len(), 2);
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("cone-export"));
}
