//! End-to-end tests of the binary: exit-code contract, manifests, artifact
//! determinism, and config merging.

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subrank"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn manifest(dir: &Path, name: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join(name)).expect("manifest exists");
    serde_json::from_str(&text).expect("valid JSON")
}

#[test]
fn gen_and_check_matroid_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "gen-matroid",
            "--kind",
            "truncated",
            "--n",
            "8",
            "--k",
            "2",
            "--set-size",
            "3",
            "--b",
            "2",
            "--d",
            "3",
            "--tau",
            "2",
            "--seed",
            "3",
            "--out",
            "work",
        ],
    );
    assert_exit(&out, 0);
    let check = run(
        dir.path(),
        &[
            "check-matroid",
            "--input",
            "work/matroid_seed3.json",
            "--out",
            "work",
        ],
    );
    assert_exit(&check, 0);
    let m = manifest(
        &dir.path().join("work"),
        "check-matroid_seed0.manifest.json",
    );
    assert_eq!(m["verdicts"]["axioms_pass"], true);
    assert_eq!(m["verdicts"]["uncrossing_pass"], true);
    assert_eq!(m["verdicts"]["rank_equivalence_pass"], true);
}

#[test]
fn largeness_violation_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "gen-matroid",
            "--kind",
            "truncated",
            "--n",
            "8",
            "--k",
            "3",
            "--set-size",
            "4",
            "--b",
            "1",
            "--d",
            "5",
            "--tau",
            "2",
            "--seed",
            "9",
            "--out",
            "work",
        ],
    );
    assert_exit(&out, 1);
    let m = manifest(&dir.path().join("work"), "gen-matroid_seed9.manifest.json");
    assert_eq!(m["verdicts"]["accepted"], false);
    assert!(m["verdicts"]["violation"]["violating_indices"].is_array());
}

#[test]
fn learn_then_evaluate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let learn = run(
        dir.path(),
        &[
            "learn", "general", "--target", "free:10", "--ell", "800", "--seed", "21", "--out", "a",
        ],
    );
    assert_exit(&learn, 0);
    for out_dir in ["e1", "e2"] {
        let eval = run(
            dir.path(),
            &[
                "evaluate",
                "--hypothesis",
                "a/hypothesis_general_seed21.json",
                "--target",
                "free:10",
                "--seed",
                "21",
                "--out",
                out_dir,
            ],
        );
        assert_exit(&eval, 0);
    }
    let a = std::fs::read(dir.path().join("e1/evaluate_seed21.csv")).unwrap();
    let b = std::fs::read(dir.path().join("e2/evaluate_seed21.csv")).unwrap();
    assert_eq!(a, b, "CSV bodies must be byte-identical across reruns");
    let m = manifest(&dir.path().join("e1"), "evaluate_seed21.manifest.json");
    assert_eq!(m["artifacts"][0]["file"], "evaluate_seed21.csv");
    assert_eq!(m["artifacts"][0]["rows"], 4);
    assert!(m["verdicts"]["coverage"].as_f64().unwrap() > 0.8);
}

#[test]
fn expander_check_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // Absurdly tight slack on a tiny right side: expansion cannot hold.
    let out = run(
        dir.path(),
        &[
            "gen-expander",
            "--k",
            "8",
            "--n",
            "10",
            "--d",
            "4",
            "--check-l",
            "3",
            "--check-eps",
            "0.05",
            "--seed",
            "2",
            "--out",
            "work",
        ],
    );
    assert_exit(&out, 1);
    let m = manifest(&dir.path().join("work"), "gen-expander_seed2.manifest.json");
    assert_eq!(m["verdicts"]["expander"], false);
}

#[test]
fn concentration_and_hardness_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let conc = run(
        dir.path(),
        &[
            "concentration",
            "--target",
            "card:100:50",
            "--t",
            "3",
            "--trials",
            "2000",
            "--seed",
            "4",
            "--out",
            "work",
        ],
    );
    assert_exit(&conc, 0);
    let vc = run(
        dir.path(),
        &[
            "hardness",
            "vertexcover",
            "--n",
            "16",
            "--epsilon",
            "0.2",
            "--k",
            "2",
            "--seed",
            "17",
            "--out",
            "work",
        ],
    );
    assert_exit(&vc, 0);
    let m = manifest(
        &dir.path().join("work"),
        "hardness-vertexcover_seed17.manifest.json",
    );
    assert_eq!(m["verdicts"]["matches"], true);
    assert_eq!(m["verdicts"]["exhaustive"], true);
}

#[test]
fn config_merging_and_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"seed": 77, "target": "free:8", "ell": 400}"#,
    )
    .unwrap();
    let out = run(
        dir.path(),
        &["learn", "general", "--config", "cfg.json", "--out", "work"],
    );
    assert_exit(&out, 0);
    assert!(dir
        .path()
        .join("work/hypothesis_general_seed77.json")
        .exists());

    // Flags beat config.
    let out = run(
        dir.path(),
        &[
            "learn", "general", "--config", "cfg.json", "--seed", "99", "--out", "work",
        ],
    );
    assert_exit(&out, 0);
    assert!(dir
        .path()
        .join("work/hypothesis_general_seed99.json")
        .exists());

    // Unknown keys are rejected by name.
    std::fs::write(dir.path().join("bad.json"), r#"{"frobnicate": 1}"#).unwrap();
    let out = run(
        dir.path(),
        &[
            "learn", "general", "--config", "bad.json", "--target", "free:8", "--out", "work",
        ],
    );
    assert_exit(&out, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("frobnicate"));
}

#[test]
fn describe_known_and_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["describe", "learn"]);
    assert_exit(&out, 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("ceil((48n/eps)*ln(9n/(delta*eps)))"));
    let out = run(dir.path(), &["describe", "gen-matroid"]);
    assert_exit(&out, 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("ceil(8*log2(k))"));
    let out = run(dir.path(), &["describe", "no-such-command"]);
    assert_exit(&out, 2);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["learn", "general", "--out", "work"]);
    assert_exit(&out, 2);
    let out = run(
        dir.path(),
        &["evaluate", "--target", "free:8", "--out", "work"],
    );
    assert_exit(&out, 2);
    let out = run(dir.path(), &["frobnicate"]);
    assert_exit(&out, 2);
}

#[test]
fn tabulated_target_round_trips_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    // Triangle cut function tabulated over n = 3, binary-counter order.
    std::fs::write(
        dir.path().join("cut.json"),
        r#"{"n":3,"values":[0.0,2.0,2.0,2.0,2.0,2.0,2.0,0.0]}"#,
    )
    .unwrap();
    let out = run(
        dir.path(),
        &[
            "concentration",
            "--target",
            "tabulated:cut.json",
            "--b",
            "2",
            "--t",
            "1",
            "--trials",
            "500",
            "--seed",
            "8",
            "--out",
            "work",
        ],
    );
    assert_exit(&out, 0);
    let m = manifest(
        &dir.path().join("work"),
        "concentration_seed8.manifest.json",
    );
    assert_eq!(m["artifacts"][0]["rows"], 500);
}

#[test]
fn samples_csv_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    // Train the boolean learner from an explicit CSV.
    std::fs::write(
        dir.path().join("samples.csv"),
        "set,value\n03,1\n04,0\n18,1\n20,0\n",
    )
    .unwrap();
    let out = run(
        dir.path(),
        &[
            "learn",
            "boolean",
            "--samples",
            "samples.csv",
            "--n",
            "6",
            "--seed",
            "1",
            "--out",
            "work",
        ],
    );
    assert_exit(&out, 0);
    let text =
        std::fs::read_to_string(dir.path().join("work/hypothesis_boolean_seed1.json")).unwrap();
    let file: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(file["kind"], "null-subcube");
    // zero-labeled masks 04 = {2} and 20 = {5} are eliminated
    assert_eq!(file["u"], serde_json::json!([2, 5]));
}
