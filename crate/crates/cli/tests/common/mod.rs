#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klmteam"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub struct Golden {
    pub args: Vec<String>,
    pub stdout: &'static str,
    pub code: i32,
}

fn golden(args: &[&str], stdout: &'static str, code: i32) -> Golden {
    let args = args
        .iter()
        .map(|a| match a.strip_prefix('@') {
            Some(name) => fixture(name),
            None => a.to_string(),
        })
        .collect();
    Golden { args, stdout, code }
}

/// Every documented example command with its exact stdout and exit code.
/// `@name` refers to a file under `tests/fixtures`.
pub fn goldens() -> Vec<Golden> {
    vec![
        golden(&["eval", "--vars", "p,q,r", "--team", "100;010", "--formula", "dep(p;q)"], "true\n", 0),
        golden(&["eval", "--vars", "p", "--team", "", "--formula", "F"], "true\n", 0),
        golden(&["eval", "--vars", "p,q,r", "--team", "100;010", "--formula", "dep(p)"], "false\n", 1),
        golden(&["entail", "@trivial.json", "T", "p&q&r"], "true\n", 0),
        golden(&["entail", "@chain.json", "p", "p"], "true\n", 0),
        golden(&["entail", "@strict.json", "dep(p) | q", "dep(p) | q"], "true\n", 0),
        golden(
            &["entail", "@chain.json", "p", "q"],
            "false\nminimal state low satisfies p but not q\n",
            1,
        ),
        golden(
            &["entail", "@chain.json", "p", "q", "--engine", "oracle"],
            "false\nminimal state low satisfies p but not q\n",
            1,
        ),
        golden(&["verify", "@strict.json"], "cumulative: pass\n  note: states with empty labels satisfy every formula: d\n", 0),
        golden(
            &["verify", "@cycle.json"],
            "cumulative: fail\n  witness: subset {a, b} is not smooth at {a, b}\n",
            1,
        ),
        golden(&["systemc", "@strict.json", "@universe.txt"], "System C: pass\n", 0),
        golden(
            &["succ-entail", "--label", "@label.circ", "--order", "@const0.circ", "--vars", "p", "--state-bits", "1", "T", "dep(p)"],
            "true\n",
            0,
        ),
        golden(
            &["succ-entail", "--label", "@label.circ", "--order", "@const0.circ", "--vars", "p", "--state-bits", "1", "T", "p"],
            "false\nminimal state 1 satisfies T but not p\n",
            1,
        ),
        golden(
            &["succ-entail", "--label", "@label.circ", "--order", "@lt.circ", "--vars", "p", "--state-bits", "1", "T", "p"],
            "true\n",
            0,
        ),
    ]
}

/// Runs one golden case; `Err` describes the mismatch.
pub fn check(g: &Golden) -> Result<(), String> {
    let args: Vec<&str> = g.args.iter().map(String::as_str).collect();
    let out = run(&args);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let code = out.status.code().unwrap_or(-1);
    if stdout != g.stdout || code != g.code {
        return Err(format!(
            "{:?}: expected exit {} and {:?}, got exit {} and {:?} (stderr {:?})",
            g.args,
            g.code,
            g.stdout,
            code,
            stdout,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(())
}
