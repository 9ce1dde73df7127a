mod common;

use std::io::Write;

use common::{fixture, run};

#[test]
fn goldens() {
    for g in common::goldens() {
        common::check(&g).unwrap();
    }
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn quiet_keeps_exit_codes() {
    let out = run(&["--quiet", "eval", "--vars", "p,q,r", "--team", "100;010", "--formula", "dep(p)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let out = run(&["eval", "--quiet", "--vars", "p", "--team", "1", "--formula", "p"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn json_reports() {
    let out = run(&["--json", "eval", "--vars", "p,q,r", "--team", "100;010", "--formula", "dep(p) | dep(p)"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"], true);
    assert_eq!(v["team"], "010;100");

    let out = run(&["--json", "entail", &fixture("chain.json"), "p", "q"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violating_state"], "low");

    let out = run(&["--json", "verify", &fixture("cycle.json")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["reports"][0]["witnesses"][0]["kind"], "not_smooth");
}

#[test]
fn engines_agree_on_eval() {
    for engine in ["generic", "flat", "oracle"] {
        let args = ["eval", "--vars", "p,q", "--team", "10;11", "--formula", "p & (q | ~q)", "--engine", engine];
        assert_eq!(code(&args), 0, "{engine}");
    }
    assert_eq!(code(&["eval", "--vars", "p", "--team", "1", "--formula", "dep(p)", "--engine", "flat"]), 2);
}

#[test]
fn entail_verify_warns_on_non_smooth_model() {
    let out = run(&["entail", &fixture("cycle.json"), "p", "~p", "--verify"]);
    // S(p) = {a, b} has no minimal state, so the entailment holds vacuously
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning: model is not cumulative"), "{stderr}");
}

#[test]
fn tpl_rejects_dependence_atoms() {
    assert_eq!(code(&["entail", &fixture("chain.json"), "p", "dep(q)", "--logic", "tpl"]), 2);
    assert_eq!(code(&["entail", &fixture("chain.json"), "p", "q", "--logic", "tpl"]), 1);
}

#[test]
fn strong_verification() {
    let u = fixture("universe.txt");
    assert_eq!(code(&["verify", &fixture("strict.json"), "--universe", &u, "--strong"]), 1);
    assert_eq!(code(&["verify", &fixture("chain.json"), "--universe", &u, "--strong"]), 0);
    assert_eq!(code(&["verify", &fixture("chain.json"), "--strong"]), 2);
    assert_eq!(code(&["verify", &fixture("chain.json"), "--mode", "universe"]), 2);
}

#[test]
fn succinct_vars_by_count() {
    let args = [
        "succ-entail", "--label", &fixture("label.circ"), "--order", &fixture("lt.circ"),
        "--vars", "1", "--state-bits", "1", "T", "x1",
    ];
    assert_eq!(code(&args), 0);
}

#[test]
fn garbage_inputs_exit_2() {
    let unknown_key = temp(r#"{"vars": ["p"], "states": {}, "extra": 1}"#);
    let bad_value = temp(r#"{"vars": ["p"], "states": {"s": [[{"p": 2}]]}}"#);
    let missing_var = temp(r#"{"vars": ["p", "q"], "states": {"s": [[{"p": 1}]]}}"#);
    let bad_order = temp(r#"{"vars": ["p"], "states": {"s": []}, "order": [["s", "t"]]}"#);
    let not_json = temp("vars: p");
    for f in [&unknown_key, &bad_value, &missing_var, &bad_order, &not_json] {
        let path = f.path().to_str().unwrap();
        assert_eq!(code(&["verify", path]), 2, "{path}");
        assert_eq!(code(&["entail", path, "T", "T"]), 2);
    }

    let bad_universe = temp("p\nq &\n");
    let out = run(&["systemc", &fixture("strict.json"), bad_universe.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let bad_circuit = temp("inputs 2\ng2 = FOO i0\noutputs g2\n");
    let no_outputs = temp("inputs 2\ng2 = NOT i0\n");
    let lt = fixture("lt.circ");
    for c in [&bad_circuit, &no_outputs] {
        let args = ["succ-entail", "--label", &fixture("label.circ"), "--order", c.path().to_str().unwrap(),
            "--vars", "p", "--state-bits", "1", "T", "p"];
        assert_eq!(code(&args), 2);
    }
    let unstable = temp("inputs 3\ng3 = OR i1 i2\noutputs g3 g3\n");
    let args = ["succ-entail", "--label", unstable.path().to_str().unwrap(), "--order", &lt,
        "--vars", "p", "--state-bits", "1", "T", "p"];
    assert_eq!(code(&args), 2);

    assert_eq!(code(&["eval", "--vars", "p", "--team", "1", "--formula", "q"]), 2);
    assert_eq!(code(&["eval", "--vars", "p", "--team", "10", "--formula", "p"]), 2);
    assert_eq!(code(&["eval", "--vars", "p,p", "--team", "", "--formula", "p"]), 2);
    assert_eq!(code(&["eval", "--vars", "p", "--team", "1", "--formula", "p &"]), 2);
    assert_eq!(code(&["entail", "/nonexistent/model.json", "T", "T"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["eval", "--vars", "p"]), 2);
}

#[test]
fn bench_smoke_and_caps() {
    let out = run(&["bench", "--logic", "pdl", "--max-team-size", "4", "--trials", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].split_whitespace().eq(["logic", "team_size", "formula_size", "median_ns"]));

    let out = run(&["--json", "bench", "--logic", "tpl", "--max-team-size", "3", "--trials", "2"]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["team_size"], 3);
    assert_eq!(rows[2]["logic"], "tpl");

    assert_eq!(code(&["bench", "--logic", "pdl", "--max-team-size", "21"]), 2);
    assert_eq!(code(&["bench", "--logic", "tpl", "--max-team-size", "33"]), 2);
}
