use std::path::Path;

use assert_cmd::Command;

fn chordtest() -> Command {
    Command::cargo_bin("chordtest").unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn selfcheck_passes() {
    let out = chordtest().arg("selfcheck").assert().success().get_output().stdout.clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.lines().count() >= 6);
    assert!(!text.contains("FAIL"));
}

#[test]
fn blowup_is_rejected_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs.csv");
    chordtest()
        .args(["test-chordal", "--generator", "c4-blowup:part=10", "--sample-size", "12", "--trials", "5"])
        .arg("--out")
        .arg(&out)
        .assert()
        .code(1);
    assert!(out.exists());
    assert!(dir.path().join("runs.manifest.json").exists());
}

#[test]
fn csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        chordtest()
            .args(["test-chordal", "--generator", "random-gnp:n=30,p=0.2", "--sample-size", "10", "--trials", "8"])
            .args(["--seed", "3", "--out"])
            .arg(&out)
            .assert()
            .code(predicates::ord::le(1));
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn chordal_input_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "path.txt", "4 3\n0 1\n1 2\n2 3\n");
    chordtest().args(["test-chordal", "--sample-size", "4", "--trials", "3", "--input"]).arg(&g).assert().code(0);
}

#[test]
fn bad_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    chordtest().args(["test-chordal", "--generator", "no-such-thing:n=3"]).assert().code(2);
    let bad = write(dir.path(), "bad.txt", "3 1\n2 1\n");
    chordtest().args(["test-chordal", "--sample-size", "3", "--input"]).arg(&bad).assert().code(2);
    chordtest().args(["test-chordal", "--eps", "1.5", "--generator", "random-gnp:n=5"]).assert().code(2);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"kind": "chordal", "eps": 0.1, "trials": 4, "sample_size": 12, "seed": 1, "generator": {"kind": "c4-blowup", "part": 10}}"#,
    );
    let out = dir.path().join("runs.csv");
    chordtest().args(["test-chordal", "--trials", "6", "--config"]).arg(&cfg).arg("--out").arg(&out).assert().code(1);
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn enumerate_reps_lists_classes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "e3.txt", "3 0\n");
    let out = chordtest().args(["enumerate-reps", "--input"]).arg(&g).assert().success().get_output().stdout.clone();
    assert!(String::from_utf8(out).unwrap().starts_with("# 7 minimal representations"));
    let c4 = write(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n0 3\n");
    chordtest().args(["enumerate-reps", "--input"]).arg(&c4).assert().code(2);
}

#[test]
fn repair_writes_a_chordal_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n0 3\n");
    let out = dir.path().join("fixed.txt");
    chordtest().args(["repair", "--eps", "0.5", "--input"]).arg(&g).arg("--out").arg(&out).assert().success();
    let fixed = chordtest::Graph::parse_edge_list(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(chordtest::oracles::is_chordal(&fixed));
}

#[test]
fn budget_check_prints_json() {
    let out = chordtest().args(["budget-check", "--eps", "0.1"]).assert().success().get_output().stdout.clone();
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert!(v.is_object());
}
