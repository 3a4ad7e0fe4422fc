use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "core",
        "tests",
        "fixtures",
        name,
    ]
    .iter()
    .collect();
    p.to_string_lossy().into_owned()
}

fn striprev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_striprev"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn verdict<'a>(report: &'a Value, action: &str) -> &'a Value {
    report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["action"] == action)
        .unwrap()
}

fn solver_available() -> bool {
    striprev::encodings::default_solver_command().is_some()
}

#[test]
fn check_universal_example1() {
    let r = json(&striprev(&[
        "check",
        &fixture("example1.pddl"),
        "--mode",
        "universal",
        "--horizon",
        "1",
    ]));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["domain"], "example1");
    assert_eq!(verdict(&r, "del-f")["status"], "reversible");
    assert_eq!(
        verdict(&r, "del-f")["witnesses"],
        serde_json::json!([["add-f"]])
    );
    assert_eq!(verdict(&r, "add-f")["status"], "irreversible");
    let names: Vec<&str> = r["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["action"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["del-f", "add-f"]);
}

#[test]
fn check_rev2_exact() {
    let r = json(&striprev(&[
        "check",
        &fixture("rev-2.pddl"),
        "--mode",
        "universal",
        "--horizon",
        "2",
        "--exact",
    ]));
    assert_eq!(r["config"]["search"], "exact");
    assert_eq!(
        verdict(&r, "del-all")["witnesses"],
        serde_json::json!([["add-f0", "add-f1"]])
    );
    for a in ["add-f0", "add-f1"] {
        assert_eq!(verdict(&r, a)["status"], "irreversible");
    }
}

#[test]
fn check_phi_mode() {
    let r = json(&striprev(&[
        "check",
        &fixture("example1.pddl"),
        "--mode",
        "phi",
        "--phi",
        "(not f)",
        "--horizon",
        "1",
    ]));
    assert_eq!(r["config"]["phi"], "(not f)");
    assert_eq!(verdict(&r, "add-f")["status"], "reversible");
    assert_eq!(
        verdict(&r, "add-f")["witnesses"],
        serde_json::json!([["del-f"]])
    );
}

#[test]
fn check_explicit_states_and_subset() {
    let dir = tempfile::tempdir().unwrap();
    let states = dir.path().join("states.json");
    std::fs::write(&states, r#"[[]]"#).unwrap();
    let r = json(&striprev(&[
        "check",
        &fixture("example1.pddl"),
        "--states",
        states.to_str().unwrap(),
        "--actions",
        "add-f",
    ]));
    assert_eq!(r["config"]["mode"], "set");
    assert_eq!(r["verdicts"].as_array().unwrap().len(), 1);
    assert_eq!(verdict(&r, "add-f")["status"], "reversible");
}

#[test]
fn check_in_task() {
    let r = json(&striprev(&[
        "check",
        &fixture("rev-2.pddl"),
        "--task",
        &fixture("rev-2-full.problem.pddl"),
        "--horizon",
        "2",
    ]));
    assert_eq!(r["config"]["mode"], "task");
    assert_eq!(verdict(&r, "del-all")["status"], "reversible");
    assert_eq!(verdict(&r, "add-f0")["status"], "unknown-up-to-horizon");
}

#[test]
fn output_is_reproducible_without_timing() {
    let args = [
        "check",
        &fixture("rev-2.pddl"),
        "--horizon",
        "3",
        "--no-timing",
    ];
    let a = striprev(&args);
    let b = striprev(&[&args[..], &["--jobs", "3"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("elapsed_ms"));
    let timed = json(&striprev(&["check", &fixture("rev-2.pddl")]));
    assert!(verdict(&timed, "del-all")["elapsed_ms"].is_number());
}

#[test]
fn pretty_table() {
    let out = striprev(&[
        "--pretty",
        "check",
        &fixture("rev-2.pddl"),
        "--horizon",
        "2",
        "--exact",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("del-all  reversible"));
    assert!(text.contains("<add-f0, add-f1>"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("striprev.toml");
    std::fs::write(&cfg, "horizon = 2\nexact = true\nno-timing = true\n").unwrap();
    let r = json(&striprev(&[
        "--config",
        cfg.to_str().unwrap(),
        "check",
        &fixture("rev-2.pddl"),
    ]));
    assert_eq!(r["config"]["horizon"], 2);
    assert_eq!(verdict(&r, "del-all")["status"], "reversible");
    assert!(verdict(&r, "del-all").get("elapsed_ms").is_none());
    let r = json(&striprev(&[
        "--config",
        cfg.to_str().unwrap(),
        "check",
        &fixture("rev-2.pddl"),
        "--horizon",
        "1",
    ]));
    assert_eq!(r["config"]["horizon"], 1);
    assert_eq!(verdict(&r, "del-all")["status"], "unknown-up-to-horizon");

    std::fs::write(&cfg, "horizn = 2\n").unwrap();
    assert_eq!(
        striprev(&[
            "--config",
            cfg.to_str().unwrap(),
            "check",
            &fixture("rev-2.pddl")
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn emit_programs() {
    let out = striprev(&[
        "emit",
        &fixture("example1.pddl"),
        "--kind",
        "simple-asp",
        "--horizon",
        "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1 {chosen(A) : action(action(A))} 1."));
    assert!(text.contains("#const horizon=1."));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rev-2.lp");
    let out = striprev(&[
        "emit",
        &fixture("rev-2.pddl"),
        "--kind",
        "general-elp",
        "--horizon",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("&k{"));
    assert!(text.contains("#const horizon=2."));

    let out = striprev(&[
        "emit",
        &fixture("example1.pddl"),
        "--kind",
        "simple-asp",
        "--phi",
        "(not f)",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("general encoding"));
}

#[test]
fn gen_rev_and_random() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(striprev(&["gen", "rev", "2", "--out-dir", d])
        .status
        .success());
    assert_eq!(
        std::fs::read_to_string(dir.path().join("rev-2.pddl")).unwrap(),
        std::fs::read_to_string(fixture("rev-2.pddl")).unwrap()
    );
    assert!(striprev(&["gen", "rev", "1..6", "--out-dir", d])
        .status
        .success());
    for i in 1..=6 {
        assert!(dir.path().join(format!("rev-{i}.pddl")).exists());
    }
    let args = [
        "gen",
        "random",
        "--facts",
        "3",
        "--actions",
        "3",
        "--seed",
        "42",
        "--out-dir",
        d,
    ];
    assert!(striprev(&args).status.success());
    let first = std::fs::read_to_string(dir.path().join("random-f3-a3-s42.pddl")).unwrap();
    assert!(striprev(&args).status.success());
    assert_eq!(
        first,
        std::fs::read_to_string(dir.path().join("random-f3-a3-s42.pddl")).unwrap()
    );
    assert_eq!(
        striprev(&["gen", "rev", "0", "--out-dir", d]).status.code(),
        Some(1)
    );
}

#[test]
fn reachable_states() {
    let r = json(&striprev(&[
        "reachable",
        &fixture("example1.pddl"),
        &fixture("example1-empty.problem.pddl"),
    ]));
    assert_eq!(r["count"], 2);
    let r = json(&striprev(&[
        "reachable",
        &fixture("rev-2.pddl"),
        &fixture("rev-2-full.problem.pddl"),
    ]));
    assert_eq!(r["count"], 3);
    let out = striprev(&[
        "reachable",
        &fixture("rev-2.pddl"),
        &fixture("rev-2-full.problem.pddl"),
        "--cap",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(
        striprev(&["check", "/nonexistent.pddl"]).status.code(),
        Some(1)
    );
    assert_eq!(striprev(&["check"]).status.code(), Some(1));
    assert_eq!(striprev(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(striprev(&["--help"]).status.code(), Some(0));
    assert_eq!(
        striprev(&["check", &fixture("example1.pddl"), "--actions", "nope"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        striprev(&["check", &fixture("example1.pddl"), "--mode", "phi"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        striprev(&["check", &fixture("example1.pddl"), "--phi", "(and g)"])
            .status
            .code(),
        Some(1)
    );
    let cap = striprev(&[
        "check",
        &fixture("rev-2.pddl"),
        "--phi",
        "f0",
        "--enum-cap",
        "1",
    ]);
    assert_eq!(cap.status.code(), Some(2));
}

#[test]
fn crosscheck_missing_solver() {
    let out = striprev(&[
        "crosscheck",
        &fixture("rev-2.pddl"),
        "--horizon",
        "2",
        "--solver",
        "no-such-solver-binary {program} {all_models}",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no ASP solver found"));
}

#[test]
fn crosscheck_agrees_on_rev2() {
    if !solver_available() {
        eprintln!("no ASP solver found; skipping");
        return;
    }
    let r = json(&striprev(&[
        "crosscheck",
        &fixture("rev-2.pddl"),
        "--horizon",
        "2",
        "--no-timing",
    ]));
    assert_eq!(r["agreement"], "AGREE");
    assert_eq!(r["pairs"], 1);
    let r = json(&striprev(&[
        "crosscheck",
        &fixture("rev-2.pddl"),
        "--horizon",
        "1",
        "--no-timing",
    ]));
    assert_eq!(r["agreement"], "AGREE");
    assert_eq!(r["pairs"], 0);
}

#[test]
fn crosscheck_disagreement_exit_code() {
    if !solver_available() {
        return;
    }
    // a fake solver that always claims add-f0 undoes itself
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("fake.sh");
    std::fs::write(
        &script,
        "#!/bin/sh\necho 'Answer: 1'\necho 'chosen(\"add-f0\") occurs(\"add-f0\",1) occurs(\"add-f0\",2)'\necho SATISFIABLE\nexit 10\n",
    )
    .unwrap();
    let solver = format!("sh {} {{program}} {{all_models}}", script.display());
    let out = striprev(&[
        "crosscheck",
        &fixture("rev-2.pddl"),
        "--horizon",
        "1",
        "--solver",
        &solver,
    ]);
    assert_eq!(out.status.code(), Some(4));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["agreement"], "DISAGREE");
    assert_eq!(r["only_external"][0]["action"], "add-f0");
}
