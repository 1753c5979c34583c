use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use k4e_core::{Design, DesignRecord};
use serde_json::Value;

fn k4e(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k4e"))
        .args(args)
        .env_remove("K4E_ORDER")
        .env_remove("K4E_JOBS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_order6() {
    let v = json(&k4e(&["classify", "--order", "6"]));
    assert_eq!(v["class_count"], 1);
    assert_eq!(v["classes"][0]["aut_order"], 24);
    assert_eq!(v["labeled_total"], 30);
}

#[test]
fn classify_order10_csv() {
    let out = k4e(&["classify", "--order", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("class,aut_order,labeled_count,blocks\n"));
}

#[test]
fn spectrum_order10_excludes_seven() {
    let v = json(&k4e(&["spectrum", "--order", "10"]));
    assert_eq!(v["excluded_within_adm"].as_array().unwrap().len(), 7);
    assert_eq!(v["j"], v["reference_j"]);
    assert_eq!(v["j_t"], v["reference_j_t"]);
    let first = &v["achieved"][0];
    assert!(first["perm"].is_array());
}

#[test]
fn outputs_are_identical_across_runs_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    for (name, jobs) in [("a", "1"), ("b", "3")] {
        let out = k4e(&["adm", "--order", "11", "--output", &path(&format!("adm-{name}"))]);
        assert!(out.status.success());
        let out = k4e(&[
            "spectrum",
            "--order",
            "10",
            "--jobs",
            jobs,
            "--output",
            &path(&format!("spectrum-{name}")),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(path("adm-a")).unwrap(), fs::read(path("adm-b")).unwrap());
    assert_eq!(
        fs::read(path("spectrum-a")).unwrap(),
        fs::read(path("spectrum-b")).unwrap()
    );
}

#[test]
fn verify_bundled_and_tampered() {
    let v = json(&k4e(&["verify", "--order", "6"]));
    assert_eq!(v["reports"][0]["passed"], 4);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("certs.json");
    fs::write(
        &file,
        r#"{"sets":[{"order":6,"designs":{"B":[[0,1,2,3],[2,3,4,5],[4,5,0,1]]},
            "certificates":[{"s":0,"t":3,"perm":"(1 2)","source":"B","target":"B"}]}]}"#,
    )
    .unwrap();
    let out = k4e(&["verify", "--certificates", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["command"], "verify");
    assert_eq!(err["kind"], "verification");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report["reports"][0]["outcomes"][0]["observed"],
        serde_json::json!([0, 2])
    );
}

#[test]
fn unknown_class_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("certs.json");
    fs::write(
        &file,
        r#"{"sets":[{"order":6,"designs":{},"certificates":[{"s":0,"t":3,"perm":"(1 2)","source":"B","target":"B"}]}]}"#,
    )
    .unwrap();
    let out = k4e(&["verify", "--certificates", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "computation");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(k4e(&["adm", "--order", "7"]).status.code(), Some(2));
    assert_eq!(k4e(&["classify"]).status.code(), Some(2));
    assert_eq!(
        k4e(&["spectrum", "--order", "10", "--jobs", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(k4e(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn order_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_k4e"))
        .arg("analyze")
        .env("K4E_ORDER", "6")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["designs"], 30);
}

fn records(path: &Path) -> Vec<Design> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| Design::try_from(serde_json::from_str::<DesignRecord>(l).unwrap()).unwrap())
        .collect()
}

#[test]
fn enumerate_round_trips_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.ndjson");
    let out = k4e(&["enumerate", "--order", "10", "--output", full.to_str().unwrap()]);
    assert!(out.status.success());
    let designs = records(&full);
    assert_eq!(designs.len(), 567_000);
    let text = fs::read_to_string(&full).unwrap();
    for (line, d) in text.lines().zip(&designs).step_by(997) {
        assert_eq!(serde_json::to_string(&d.to_record()).unwrap(), line);
    }

    // a run stopped after two units, with a partial third unit on disk
    let partial = dir.path().join("partial.ndjson");
    let progress = dir.path().join("progress");
    let out = k4e(&[
        "enumerate",
        "--order",
        "10",
        "--output",
        partial.to_str().unwrap(),
        "--resume",
        progress.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let lines: Vec<String> = fs::read_to_string(&progress)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert!(lines.len() > 2);
    fs::write(&progress, lines[..2].join("\n") + "\n").unwrap();
    let keep: usize = lines[1].split_whitespace().nth(1).unwrap().parse().unwrap();
    let mut bytes = fs::read(&partial).unwrap();
    bytes.truncate(keep + 100);
    fs::write(&partial, bytes).unwrap();

    let out = k4e(&[
        "enumerate",
        "--order",
        "10",
        "--jobs",
        "2",
        "--output",
        partial.to_str().unwrap(),
        "--resume",
        progress.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&partial).unwrap(), fs::read(&full).unwrap());
    assert_eq!(fs::read_to_string(&progress).unwrap().lines().count(), lines.len());
}

#[test]
fn export_writes_every_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = k4e(&["export", "--order", "6", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["classes", "analysis", "adm", "spectrum", "certificates"] {
        let text = fs::read_to_string(dir.path().join(format!("{name}.json"))).unwrap();
        serde_json::from_str::<Value>(&text).unwrap();
    }
}
