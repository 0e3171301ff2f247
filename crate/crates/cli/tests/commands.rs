use std::path::PathBuf;

use apf_cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

const EXAMPLE: &str = "\
(set-logic QF_AX)
(declare-const a (Array Int Int))
(declare-const b (Array Int Int))
(declare-const k Int)
(declare-const l Int)
(assert (forall ((i Int)) (< (select a i) (select b k))))
(assert (forall ((j Int)) (not (< (select a l) (select b j)))))
(check-sat)
";

const ARRAYS: &str = "(declare-const a (Array Int Int)) (declare-const b (Array Int Int))\n";

fn file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("apf-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn apf(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["apf"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn example_assertions_are_members() {
    let p = file("example.smt2", EXAMPLE);
    let (code, out, _) = apf(&["check-fragment", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "assert 1: member\nassert 2: member\n");
}

#[test]
fn alternation_is_reported_with_its_location() {
    let p = file(
        "i1.smt2",
        &format!("{ARRAYS}(assert (exists ((j Int)) (forall ((i Int)) (< (select a i) (select b j)))))\n"),
    );
    let (code, out, _) = apf(&["check-fragment", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.starts_with("assert 1: rejected quantifier-alternation at"), "{out}");
    let (_, json, _) = apf(&["check-fragment", p.to_str().unwrap(), "--json"]);
    assert!(json.contains("quantifier-alternation"), "{json}");
}

#[test]
fn strict_guards_are_rewritten_on_request() {
    let p = file(
        "strict.smt2",
        &format!("{ARRAYS}(assert (forall ((j Int)) (=> (< j 3) (= (select a j) 0))))\n"),
    );
    assert_eq!(apf(&["check-fragment", p.to_str().unwrap()]).0, EXIT_FAILURE);
    assert_eq!(
        apf(&["check-fragment", p.to_str().unwrap(), "--rewrite-strict"]).0,
        EXIT_OK
    );
}

#[test]
fn empty_script_is_accepted() {
    let p = file("empty.smt2", "");
    let (code, out, _) = apf(&["check-fragment", p.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (EXIT_OK, ""));
}

#[test]
fn arity_errors_carry_positions() {
    let p = file("arity.smt2", &format!("{ARRAYS}(assert (select a))\n"));
    let (code, _, err) = apf(&["check-fragment", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("2:"), "{err}");
}

#[test]
fn undeclared_symbols_are_usage_errors() {
    let p = file("undeclared.smt2", "(assert (< x 1))\n");
    assert_eq!(apf(&["check-fragment", p.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn eval_follows_parity() {
    let p = file("example-eval.smt2", EXAMPLE);
    let (code, out, _) = apf(&["eval", p.to_str().unwrap(), "--model", "paper:4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "assert 1: true\nassert 2: false\n");
    let (_, out, _) = apf(&["eval", p.to_str().unwrap(), "--model", "paper:5"]);
    assert_eq!(out, "assert 1: false\nassert 2: true\n");
}

#[test]
fn eval_reads_model_files() {
    let p = file("example-file.smt2", EXAMPLE);
    let m = file(
        "model.json",
        r#"{"ints": {"k": 1, "l": 1},
            "arrays": {"a": {"leftTail": 0, "lo": 0, "window": [], "rightTail": 0},
                       "b": {"leftTail": 5, "lo": 0, "window": [], "rightTail": 5}}}"#,
    );
    let (code, out, _) = apf(&["eval", p.to_str().unwrap(), "--model", m.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "assert 1: true\nassert 2: false\n");
    let bad = file("bad.json", r#"{"ints": {"k": "x"}}"#);
    assert_eq!(
        apf(&["eval", p.to_str().unwrap(), "--model", bad.to_str().unwrap()]).0,
        EXIT_USAGE
    );
}

#[test]
fn verify_paper_reports() {
    let (code, out, _) = apf(&["verify-paper", "--max-i", "40", "--samples", "200"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("even⊨A: 21/21, odd⊨B: 20/20"), "{out}");
    assert!(out.contains("diff axiom: 200/200"), "{out}");
    assert!(
        out.contains("clash: (< (select a l) (select b k)) / (not (< (select a l) (select b k)))"),
        "{out}"
    );
}

#[test]
fn stabilize_prints_reports() {
    let p = file(
        "stab.smt2",
        &format!("{ARRAYS}(assert (< (select b 3) (select a (diff a b))))\n"),
    );
    let (code, out, _) = apf(&["stabilize", p.to_str().unwrap(), "--extra", "10"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("(select b 3)"), "{out}");
    assert!(!out.contains("FAILED"), "{out}");
    let (_, json, _) = apf(&["stabilize", p.to_str().unwrap(), "--json"]);
    for line in json.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("index").is_some(), "{line}");
    }
}

#[test]
fn refute_exit_codes() {
    let t = file("true.smt2", "(assert true)\n");
    let (code, out, _) = apf(&["refute", t.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "true: fails-condition-ii witness 1 (odd)\n");
    let local = file("local.smt2", "(declare-const k Int)\n(assert (< k 0))\n");
    let (code, out, _) = apf(&["refute", local.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.contains("not-shared"), "{out}");
    let two = file("two.smt2", "(assert true)\n(assert false)\n");
    assert_eq!(apf(&["refute", two.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn enumerate_is_deterministic_across_jobs() {
    let one = apf(&["enumerate", "--size", "5", "--json"]);
    let two = apf(&["enumerate", "--size", "5", "--json", "--jobs", "2"]);
    assert_eq!(one.0, EXIT_OK);
    assert_eq!(one, two);
    let summary = one.1.lines().last().unwrap();
    assert!(summary.contains("survivors=0"), "{summary}");
    let (_, no_diff, _) = apf(&["enumerate", "--size", "5", "--no-diff"]);
    assert!(!no_diff.contains("diff"), "{no_diff}");
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(apf(&["enumerate", "--size", "0"]).0, EXIT_USAGE);
    assert_eq!(apf(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(apf(&["check-fragment", "/nonexistent/file.smt2"]).0, EXIT_USAGE);
    assert_eq!(apf(&["--help"]).0, EXIT_OK);
}
