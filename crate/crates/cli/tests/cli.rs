use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).display().to_string()
}

fn sill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sill"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn source(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".sill").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn json_lines(text: &str) -> Vec<serde_json::Value> {
    text.lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

#[test]
fn check_unit_cut() {
    let o = sill(&["check", &fixture("unit_cut.sill")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "⊢ Main : w:1\n");
}

#[test]
fn check_selflock_fails_with_selflock() {
    let o = sill(&["check", &fixture("selflock.sill"), "--proc", "Main"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("selflock.sill:3:3: SelfLock:"), "{err}");
    assert!(err.contains("`x`"), "{err}");
}

#[test]
fn check_with_counterexample_is_forbidden() {
    let o = sill(&["check", &fixture("with_counterexample.sill")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("HyperContextForbidden"));
}

#[test]
fn check_prints_hyper_partition_and_derivation() {
    let o = sill(&[
        "check",
        &fixture("hypersequents.sill"),
        "--proc",
        "Mix",
        "--show-derivation",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.starts_with("⊢ Mix : v:1 | w:1\n(H-Mix) ⊢ (w[].0 | v[].0) : v:1 | w:1\n"),
        "{out}"
    );
}

#[test]
fn check_json_errors_carry_documented_keys() {
    let o = sill(&["check", &fixture("selflock.sill"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let records = json_lines(&stdout(&o));
    assert_eq!(records.len(), 2);
    for r in &records {
        for key in ["kind", "name", "loc", "expected", "actual"] {
            assert!(r.get(key).is_some(), "missing {key} in {r}");
        }
        assert_eq!(r["kind"], "SelfLock");
        assert_eq!(r["name"], "x");
    }
}

#[test]
fn reduce_tensor_unit_takes_three_steps() {
    let o = sill(&[
        "reduce",
        &fixture("tensor_unit.sill"),
        "--proc",
        "Main",
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("step 1: β⊗⅋ on x ⇒ "));
    assert!(lines[1].starts_with("step 2: β1⊥ on y ⇒ "));
    assert!(lines[2].starts_with("step 3: β1⊥ on x ⇒ w[].0"));
    assert_eq!(lines[3], "canonical after 3 steps: w[].0");
}

#[test]
fn reduce_json_is_json_lines() {
    let o = sill(&["reduce", &fixture("tensor_unit.sill"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let records = json_lines(&stdout(&o));
    assert_eq!(records.len(), 4);
    assert_eq!(records[0]["rule"], "β⊗⅋");
    assert_eq!(records[0]["measure"], serde_json::json!([1, 1]));
    assert_eq!(records[3]["status"], "canonical");
}

#[test]
fn reduce_with_small_fuel_stops_early() {
    let o = sill(&["reduce", &fixture("tensor_unit.sill"), "--fuel", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("fuel exhausted after 1 steps"));
}

#[test]
fn reduce_rejects_ill_typed_input() {
    let o = sill(&["reduce", &fixture("deadlock.sill")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
}

#[test]
fn graph_of_fixture_is_a_path() {
    let o = sill(&["graph", &fixture("tensor_unit.sill")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("4 nodes, 3 edges, terminal: n3\n"));
    let dot = stdout(&sill(&["graph", &fixture("tensor_unit.sill"), "--dot"]));
    assert!(dot.starts_with("digraph reductions {"));
    assert_eq!(dot.matches(" -> ").count(), 3);
}

#[test]
fn translation_is_a_valid_hproc() {
    let o = sill(&["translate", &fixture("reductions.sill"), "--proc", "Tensor"]);
    assert_eq!(o.status.code(), Some(0));
    let image = stdout(&o);
    assert_eq!(
        image,
        "hproc Tensor : w:1 = new x:1 * 1. (x[y].(y[].0 | x[].0) | x(y).y().x().w[].0)\n"
    );
    let f = source(&image);
    let o = sill(&["check", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "⊢ Tensor : w:1\n");
}

#[test]
fn translate_refuses_hprocs() {
    let o = sill(&["translate", &fixture("hypersequents.sill"), "--proc", "Mix"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn disentangle_reports_steps_and_components() {
    let o = sill(&[
        "disentangle",
        &fixture("hypersequents.sill"),
        "--proc",
        "Extruded",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let records = json_lines(&stdout(&o));
    let kinds: Vec<&str> = records
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["step", "component", "component", "recombined"]);
    assert_eq!(records[0]["rule"], "H-Cut");
    assert_eq!(records[0]["moved"], 1);
}

#[test]
fn internalize_collapses_to_one_formula() {
    let o = sill(&[
        "internalize",
        &fixture("internalize.sill"),
        "--proc",
        "Pair",
    ]);
    assert_eq!(stdout(&o), "⊢ z(w).w().z[].0 : z:bot par 1\n");
    let o = sill(&[
        "internalize",
        &fixture("hypersequents.sill"),
        "--proc",
        "Mix",
    ]);
    assert_eq!(stdout(&o), "⊢ z[y].(y[].0 | z[].0) : z:1 * 1\n");
}

#[test]
fn fuzz_reports_are_reproducible() {
    let args = [
        "fuzz",
        "--suite",
        "simulate-forward",
        "--seed",
        "7",
        "--count",
        "25",
        "--json",
    ];
    let a = sill(&args);
    let b = sill(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let records = json_lines(&stdout(&a));
    assert_eq!(records.len(), 25);
    assert!(records
        .iter()
        .all(|r| r["status"] == "pass" && r["seed"] == 7));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(sill(&[]).status.code(), Some(2));
    assert_eq!(sill(&["fuzz", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(sill(&["check", "missing.sill"]).status.code(), Some(2));
    let f = source("proc Main : w:1 =\n  x[y].y[].0\n");
    let o = sill(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2:"), "{}", stderr(&o));
    let o = sill(&["check", &fixture("unit_cut.sill"), "--proc", "Other"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_stable() {
    let runs: Vec<Output> = (0..2)
        .map(|_| {
            sill(&[
                "reduce",
                &fixture("reductions.sill"),
                "--proc",
                "Left",
                "--trace",
            ])
        })
        .collect();
    assert_eq!(runs[0].stdout, runs[1].stdout);
    assert!(stdout(&runs[0]).contains("β⊕&₁"));
}
