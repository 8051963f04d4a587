use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

fn cl1(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cl1"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    let ok = cl1(&["check", &fixture("contraction.proof")], "");
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("7 lines, valid (mode=iso)"));

    let strict = cl1(&["check", "--mode", "strict", &fixture("contraction.proof")], "");
    assert_eq!(strict.status.code(), Some(1));
    let out = stdout(&strict);
    assert!(out.contains("line 4: error"), "{out}");
    assert!(out.contains("line 7: error"), "{out}");

    let empty = std::env::temp_dir().join(format!("cl1-empty-{}.proof", std::process::id()));
    std::fs::write(&empty, "").unwrap();
    let o = cl1(&["check", empty.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("empty-proof"));
    std::fs::remove_file(empty).unwrap();

    assert_eq!(cl1(&["check", "/nonexistent/file.proof"], "").status.code(), Some(2));
    assert_eq!(cl1(&["check", "--mode", "fuzzy", &fixture("axiom.proof")], "").status.code(), Some(2));
    assert_eq!(cl1(&["frobnicate"], "").status.code(), Some(2));
}

#[test]
fn check_json() {
    let o = cl1(&["--json", "check", "--mode", "strict", &fixture("contraction.proof")], "");
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["mode"], "strict");
    assert_eq!(v["lines"], 7);
}

#[test]
fn play_contraction() {
    let o = cl1(&["play", &fixture("contraction.proof")], "2.1\n");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("your moves: 2.1 = p, 2.2 = q"), "{out}");
    let machine: Vec<&str> = out.lines().filter_map(|l| l.strip_prefix("machine: ")).collect();
    assert_eq!(machine, ["1.2.1", "1.1.1"]);
    assert!(out.contains("machine quiescent at `p&p->p`"));
    assert!(out.contains("outcome: Machine wins under every interpretation"));
}

#[test]
fn play_stop_and_illegal() {
    let o = cl1(&["play", &fixture("contraction.proof")], "1.1.1\nstop\n");
    let out = stdout(&o);
    assert!(out.contains("illegal move 1.1.1; legal moves: 2.1, 2.2"), "{out}");
    assert!(out.contains("session stopped"));
    assert!(out.contains("outcome: Machine wins under every interpretation"));

    let o = cl1(&["play", "--forfeit-illegal", &fixture("contraction.proof")], "1.1.1\n");
    assert!(stdout(&o).contains("outcome: Environment forfeits; Machine wins"));

    let o = cl1(&["play", &fixture("contraction.proof")], "");
    assert!(stdout(&o).contains("end of input: session stopped"));
}

#[test]
fn play_with_interpretation() {
    let o = cl1(&["play", "--interp", "p=0,q=1", &fixture("contraction.proof")], "2.2\n");
    assert!(stdout(&o).contains("outcome: Machine wins under p=0,q=1"));
    let o = cl1(&["play", "--interp", "p=0", &fixture("contraction.proof")], "2.2\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn play_invalid_proof() {
    let o = cl1(&["play", &fixture("split_consequent.proof")], "2.1\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 1: error[unstable]"));
}

#[test]
fn play_transcript_replays() {
    let o = cl1(&["--json", "play", &fixture("contraction.proof")], "2.2\n");
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["final_formula"], "q&q->q");
    assert_eq!(v["status"], "quiescent");
    let run: Vec<cl1::engine::Move> = serde_json::from_value(v["run"].clone()).unwrap();
    let start = cl1::parse_formula("((p?&q)&(p?&q))->(p?&q)").unwrap();
    let replayed = cl1::engine::replay_run(&start, &run).unwrap();
    assert_eq!(replayed.to_string(), v["final_formula"].as_str().unwrap());

    let env: String = run
        .iter()
        .filter(|m| m.role == cl1::syntax::Player::Environment)
        .map(|m| format!("{m}\n"))
        .collect();
    let again = cl1(&["--json", "play", &fixture("contraction.proof")], &env);
    let w: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(w["run"], v["run"]);
    assert_eq!(w["final_formula"], v["final_formula"]);
}

#[test]
fn strategy_formats() {
    let o = cl1(&["strategy", &fixture("contraction.proof")], "");
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 7);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);

    let o = cl1(&["strategy", &fixture("choice_split.proof")], "");
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);

    let o = cl1(&["strategy", &fixture("axiom.proof")], "");
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["nodes"].as_array().unwrap().len(), v["edges"].as_array().unwrap().len()), (1, 0));

    let o = cl1(&["strategy", "--format", "graphtext", &fixture("contraction.proof")], "");
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph strategy {"));
    assert_eq!(dot.matches("style=dashed").count(), 2);
    assert_eq!(dot.matches("style=solid").count(), 4);

    assert_eq!(cl1(&["strategy", &fixture("split_consequent.proof")], "").status.code(), Some(1));
}

#[test]
fn utilities() {
    let out = |args: &[&str]| stdout(&cl1(args, "")).trim().to_string();
    assert_eq!(out(&["util", "stable", "p->(r?|q)"]), "instable");
    assert_eq!(out(&["util", "stable", "p->(r?&q)"]), "stable");
    assert_eq!(out(&["util", "elementarize", "((p?&q)&(p?&q))->(p?&q)"]), "T&T->T");
    assert_eq!(out(&["util", "iso", "p?&q", "q?&p"]), "isomorphic");
    assert_eq!(out(&["util", "iso", "--mode", "strict", "p?&q", "q?&p"]), "not isomorphic");
    assert_eq!(out(&["util", "iso", "p->q", "q->p"]), "not isomorphic");
    let v: Value = serde_json::from_str(&out(&["--json", "util", "stable", "p|~p"])).unwrap();
    assert_eq!(v["stable"], true);

    let bad = cl1(&["util", "stable", "p &"], "");
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("offset 3"));
}
