use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mixer(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixer"))
        .args(args)
        .current_dir(cwd)
        .env_remove("MIXER_LOOP_BUDGET")
        .env_remove("MIXER_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn chartable_report() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&mixer(
        &["--group", "A:5", "--seed", "0", "chartable"],
        dir.path(),
    ));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["degrees"], serde_json::json!([1, 3, 3, 4, 5]));
    assert_eq!(v["orthogonality"]["pass"], true);
    assert_eq!(v["classes"].as_array().unwrap().len(), 5);
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        mixer(
            &[
                "--group",
                "PSL2:7",
                "--seed",
                "4",
                "--threads",
                threads,
                "survey",
            ],
            dir.path(),
        )
        .stdout
    };
    let a = run("1");
    assert!(!a.is_empty());
    assert_eq!(a, run("1"));
    assert_eq!(a, run("0"));
}

#[test]
fn golden_round_trip_and_drift() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--group", "S:4", "--seed", "9", "--golden", "write", "thompson",
    ];
    assert!(mixer(&args, dir.path()).status.success());
    let file = dir.path().join("golden/v1/thompson/S_4__seed9.json");
    assert!(file.exists());
    let cmp = [
        "--group", "S:4", "--seed", "9", "--golden", "compare", "thompson",
    ];
    assert!(mixer(&cmp, dir.path()).status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    std::fs::write(&file, text.replace("\"coverage\": ", "\"coverage\": 1")).unwrap();
    let out = mixer(&cmp, dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("drift"));
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| mixer(args, dir.path()).status.code();
    assert_eq!(code(&["--group", "A:5", "chartable"]), Some(40));
    assert_eq!(
        code(&["--group", "A:11", "--seed", "1", "chartable"]),
        Some(13)
    );
    assert_eq!(
        code(&["--group", "PSL2:6", "--seed", "1", "chartable"]),
        Some(17)
    );
    assert_eq!(
        code(&["--group", "B:5", "--seed", "1", "chartable"]),
        Some(16)
    );
    assert_eq!(
        code(&["--group", "A:5", "--seed", "1", "mixpair", "--x", "9", "--y", "0"]),
        Some(35)
    );
    assert_eq!(
        code(&[
            "--group",
            "A:5",
            "--seed",
            "1",
            "survey",
            "--coupling",
            "nope"
        ]),
        Some(36)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_mixer"))
        .args([
            "--group",
            "A:5",
            "--seed",
            "1",
            "interleave",
            "--t",
            "2",
            "--alpha",
            "0.5",
        ])
        .env("MIXER_LOOP_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(30));
}

#[test]
fn mixpair_by_element() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&mixer(
        &[
            "--group",
            "A:5",
            "--seed",
            "1",
            "mixpair",
            "--x",
            "(1 2 3 4 5)",
            "--y",
            "(1 2 3 4 5)",
        ],
        dir.path(),
    ));
    assert!((v["l2_sq"].as_f64().unwrap() - 265.0 / 8640.0).abs() < 1e-15);
    assert_eq!(v["coverage"]["support"], 45);
}

#[test]
fn survey_csv_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = mixer(
        &[
            "--group", "A:5", "--seed", "1", "--format", "csv", "--out", "reports", "survey",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("reports/survey.csv")).unwrap();
    assert!(csv.starts_with("xclass,yclass,weight,N,l1,coverage\n"));
    assert_eq!(csv.lines().count(), 26);
}

#[test]
fn interleave_exact_and_mc() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "--group",
        "S:3",
        "--seed",
        "2",
        "interleave",
        "--t",
        "3",
        "--alpha",
        "1",
    ];
    let v = json(&mixer(&base, dir.path()));
    assert_eq!(v["linf"], 0.0);
    assert_eq!(v["deviation"]["implied_exponent"], "inf");
    let mut mc = base.to_vec();
    mc.extend(["--mc", "20000"]);
    let v = json(&mixer(&mc, dir.path()));
    assert_eq!(v["mode"], "montecarlo");
    assert_eq!(v["probabilities"].as_object().unwrap().len(), 6);
}

#[test]
fn advantage_from_protocol_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut all = String::from("t=2 group=S:3\n");
    let mut even = all.clone();
    let mut odd = all.clone();
    for i in 0..6 {
        for j in 0..6 {
            let line = format!("{i},{j}\n");
            all.push_str(&line);
            if i % 2 == 0 {
                even.push_str(&line);
            } else {
                odd.push_str(&line);
            }
        }
    }
    std::fs::write(dir.path().join("all.txt"), all).unwrap();
    std::fs::write(dir.path().join("even.txt"), even).unwrap();
    std::fs::write(dir.path().join("odd.txt"), odd).unwrap();
    std::fs::write(dir.path().join("const.txt"), "1,all.txt,all.txt\n").unwrap();
    std::fs::write(
        dir.path().join("split.txt"),
        "1,even.txt,all.txt\n0,odd.txt,all.txt\n",
    )
    .unwrap();
    let v = json(&mixer(
        &[
            "--group",
            "S:3",
            "--seed",
            "1",
            "advantage",
            "--protocol",
            "const.txt",
            "--g",
            "0",
            "--h",
            "(1 2)",
        ],
        dir.path(),
    ));
    assert_eq!(v["advantage"], 0.0);
    assert_eq!(v["bit_budget"], 0);
    let v = json(&mixer(
        &[
            "--group",
            "S:3",
            "--seed",
            "1",
            "advantage",
            "--protocol",
            "split.txt",
            "--g",
            "0",
            "--h",
            "(1 2)",
            "--exact",
        ],
        dir.path(),
    ));
    assert_eq!(v["bit_budget"], 1);
    assert_eq!(v["exact"]["holds"], true);
    let out = mixer(
        &[
            "--group",
            "A:4",
            "--seed",
            "1",
            "advantage",
            "--protocol",
            "split.txt",
            "--g",
            "0",
            "--h",
            "1",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
}
