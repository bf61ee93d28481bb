use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hpdl_core::kripke::KripkeModel;
use hpdl_core::{check_abox, parse_abox};

fn hpdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpdl")).args(args).output().expect("spawn hpdl")
}

fn input(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn first_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).lines().next().unwrap_or_default().to_owned()
}

#[test]
fn unsat_example_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = input(dir.path(), "g.hpdl", "'a:[s*]p;\ns('a,'b);\n'b:<(?('a)+s)*>~p  # the worked example\n");
    let o = hpdl(&[&f]);
    assert_eq!(first_line(&o), "UNSAT");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sat_writes_a_checked_model() {
    let dir = tempfile::tempdir().unwrap();
    let f = input(dir.path(), "g.hpdl", "'a:p");
    let m = dir.path().join("m.json");
    let o = hpdl(&["--model", m.to_str().unwrap(), &f]);
    assert_eq!(first_line(&o), "SAT");
    assert_eq!(o.status.code(), Some(0));
    let model = KripkeModel::from_json(&fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(model.world_count(), 1);
    assert!(check_abox(&model, &parse_abox("'a:p").unwrap()).unwrap().holds());
}

#[test]
fn model_is_checked_against_the_input_as_written() {
    let dir = tempfile::tempdir().unwrap();
    let text = "'a:~[s]~(p -> q); 'a:p";
    let f = input(dir.path(), "g.hpdl", text);
    let m = dir.path().join("m.json");
    let o = hpdl(&["--model", m.to_str().unwrap(), &f]);
    assert_eq!(o.status.code(), Some(0));
    let model = KripkeModel::from_json(&fs::read_to_string(&m).unwrap()).unwrap();
    assert!(check_abox(&model, &parse_abox(text).unwrap()).unwrap().holds());
}

#[test]
fn no_model_file_on_unsat() {
    let dir = tempfile::tempdir().unwrap();
    let f = input(dir.path(), "g.hpdl", "'a:p; 'a:~p");
    let m = dir.path().join("m.json");
    let o = hpdl(&["--model", m.to_str().unwrap(), &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!m.exists());
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = hpdl(&["/definitely/not/here.hpdl"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = input(dir.path(), "g.hpdl", "'a:p;\n'b:[s*");
    let o = hpdl(&[&f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(hpdl(&[]).status.code(), Some(2));
    assert_eq!(hpdl(&["--max-nodes", "0", "x"]).status.code(), Some(2));
    assert_eq!(hpdl(&["a", "b"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = input(dir.path(), "g.hpdl", "'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*>~p");
    let o = hpdl(&["--max-nodes", "3", &f]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn trace_stats_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let f = input(dir.path(), "g.hpdl", "'a:<s>p; 'a:[s]q");
    let d = dir.path().join("t.dot");
    let o = hpdl(&["--trace", "--stats", "--dot", d.to_str().unwrap(), &f]);
    assert_eq!(first_line(&o), "SAT");
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("\"nodes\""));
    assert!(err.lines().count() > 5);
    assert!(fs::read_to_string(&d).unwrap().starts_with("digraph"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = input(dir.path(), "g.hpdl", "'a:<(s;t)*>p; 'a:[s*](q | 'b); 'b:~p");
    let run = |tag: &str| {
        let m = dir.path().join(format!("{tag}.json"));
        let d = dir.path().join(format!("{tag}.dot"));
        let o = hpdl(&["--seed", "3", "--model", m.to_str().unwrap(), "--dot", d.to_str().unwrap(), &f]);
        (o.stdout, fs::read(m).unwrap(), fs::read(d).unwrap())
    };
    assert_eq!(run("one"), run("two"));
}

#[test]
fn pruning_and_seeds_agree() {
    let dir = tempfile::tempdir().unwrap();
    let f = input(dir.path(), "g.hpdl", "'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*>~p");
    for args in [vec!["--reachability-pruning"], vec!["--seed", "7"]] {
        let mut a = args.clone();
        a.push(&f);
        assert_eq!(first_line(&hpdl(&a)), "UNSAT");
    }
}
