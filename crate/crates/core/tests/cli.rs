//! End-to-end runs of the command line.

mod common;

use std::fs;
use std::process::Command;

use common::data_path;
use nhl::cli::{run, Io, EXIT_INPUT, EXIT_INVALID, EXIT_UNKNOWN, EXIT_VALID};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn nhl(args: &[&str], input: &str) -> Run {
    let mut inp = input.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("nhl").chain(args.iter().copied()),
        &mut Io { input: &mut inp, out: &mut out, err: &mut err },
    );
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn p(rel: &str) -> String {
    data_path(rel).to_string_lossy().into_owned()
}

fn verify(spec: &str, program: &str, relation: &str, extra: &[&str]) -> Run {
    let (s, pr, r) = (p(spec), p(program), p(relation));
    let mut args = vec!["verify", "--spec", &s, "--program", &pr, "--relation", &r];
    args.extend_from_slice(extra);
    nhl(&args, "")
}

#[test]
fn valid_run() {
    let r = verify("specs/balance.spec", "programs/increment.imp", "relations/balance.rel", &[]);
    assert_eq!(r.code, EXIT_VALID, "{}", r.err);
    assert_eq!(r.out, "positive\tmain\tValid\t\n");
}

#[test]
fn counterexample_run() {
    let r = verify("specs/balance.spec", "programs/decrement.imp", "relations/balance.rel", &[]);
    assert_eq!(r.code, EXIT_INVALID);
    assert_eq!(r.out, "positive\tmain\tInvalid\t_balance=1\n");
}

#[test]
fn loops_report_every_vc() {
    let r = verify("specs/totals.spec", "programs/sum.imp", "relations/total.rel", &[]);
    assert_eq!(r.code, EXIT_VALID, "{}", r.err);
    let provs: Vec<&str> = r.out.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(provs, ["main", "loop-preservation(1)", "loop-exit(1)"]);

    let r = verify("specs/totals.spec", "programs/sum_noinv.imp", "relations/total.rel", &[]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.spec");
    fs::write(&spec, "All fees must be positive.\n").unwrap();
    let s = spec.to_string_lossy();
    let (pr, rel) = (p("programs/increment.imp"), p("relations/balance.rel"));
    let r = nhl(&["verify", "--spec", &s, "--program", &pr, "--relation", &rel], "");
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("unknown words: fees"), "{}", r.err);

    assert_eq!(nhl(&["verify", "--program", &pr], "").code, EXIT_INPUT);
    assert_eq!(nhl(&["verify", "--no-such-flag"], "").code, EXIT_INPUT);
    assert_eq!(nhl(&["parse", "--k", "0", "all balances are positive"], "").code, EXIT_INPUT);
}

/// A lexicon in which the two readings of "amounts" weigh the same.
fn tied_lexicon(dir: &std::path::Path) -> String {
    let lex = fs::read_to_string(p("grammar/lexicon.txt"))
        .unwrap()
        .replace("lam x. valueof(x) | -0.7", "lam x. valueof(x) | -0.5");
    let path = dir.join("tied.lex");
    fs::write(&path, lex).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn exact_tie_needs_interaction() {
    let dir = tempfile::tempdir().unwrap();
    let lex = tied_lexicon(dir.path());
    let r = verify("specs/ambiguous.spec", "programs/increment.imp", "relations/balance.rel", &["--lexicon", &lex]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("amounts: ambiguous; rerun interactive"), "{}", r.err);

    // The untied shipped lexicon just takes the better reading.
    let r = verify("specs/ambiguous.spec", "programs/increment.imp", "relations/balance.rel", &[]);
    assert_eq!(r.code, EXIT_VALID, "{}", r.err);
}

#[test]
fn interactive_selection_and_rephrase() {
    let args = |extra: &'static str| {
        vec![
            "verify".to_string(),
            "--spec".into(),
            p("specs/ambiguous.spec"),
            "--program".into(),
            p("programs/increment.imp"),
            "--relation".into(),
            p(extra),
            "--interactive".into(),
        ]
    };
    let call = |a: Vec<String>, input: &str| {
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        nhl(&refs, input)
    };

    let r = call(args("relations/balance.rel"), "y\n");
    assert_eq!(r.code, EXIT_VALID, "{}", r.err);
    assert_eq!(r.err.lines().next(), Some("amounts: Did you mean: all balances must be greater than zero? [y/n]"));

    // Declining the first reading selects the second, over `valueof`.
    let r = call(args("relations/values.rel"), "n\ny\n");
    assert_eq!(r.code, EXIT_VALID, "{}", r.err);
    assert_eq!(r.err.lines().count(), 2);

    let r = call(args("relations/balance.rel"), "n\nn\nn\nn\nn\n");
    assert_eq!(r.code, EXIT_UNKNOWN);
    assert!(r.err.contains("please rephrase"), "{}", r.err);
    assert!(r.out.is_empty());
}

#[test]
fn smt_scripts_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    let r = verify(
        "specs/balance.spec",
        "programs/increment.imp",
        "relations/balance.rel",
        &["--emit-smt", "--out", &out],
    );
    assert_eq!(r.code, EXIT_VALID, "{}", r.err);
    let smt = fs::read_to_string(dir.path().join("positive.vc1.smt2")).unwrap();
    assert!(smt.contains("(check-sat)"), "{smt}");
    let record = fs::read_to_string(dir.path().join("positive.proof")).unwrap();
    assert!(record.contains("vc: main\tValid"), "{record}");

    // The values specification reuses the stored proof through the KB.
    let kb = p("kb/balance_valueof.kb");
    let r = verify(
        "specs/values.spec",
        "programs/increment.imp",
        "relations/values.rel",
        &["--kb", &kb, "--records", &out],
    );
    assert_eq!(r.code, EXIT_VALID, "{}", r.err);
    assert_eq!(r.out, "values-positive\tmain\tValid\ttransferred from positive.proof\n");

    // A different program cannot borrow it.
    let r = verify(
        "specs/values.spec",
        "programs/decrement.imp",
        "relations/values.rel",
        &["--kb", &kb, "--records", &out],
    );
    assert_eq!(r.code, EXIT_INVALID);
}

#[test]
fn parse_paraphrase_and_wp() {
    let r = nhl(&["parse", "All", "balances", "must", "be", "greater", "than", "zero."], "");
    assert_eq!(r.code, EXIT_VALID);
    assert_eq!(r.out, "0.000\tinvariant\tforall x. balance(x) > 0\n");

    let r = nhl(&["paraphrase", "forall x. balance(x) > 0"], "");
    assert_eq!((r.code, r.out.as_str()), (EXIT_VALID, "all balances must be greater than zero\n"));
    assert_eq!(nhl(&["paraphrase", "_balance + 1"], "").code, EXIT_INPUT);

    let pr = p("programs/increment.imp");
    let r = nhl(&["wp", "--program", &pr, "--post", "_balance > 0"], "");
    assert_eq!(r.out, "wp\t_balance + 1 > 0\n");
}

#[test]
fn binary_exit_code() {
    let status = Command::new(env!("CARGO_BIN_EXE_nhl"))
        .args(["verify", "--spec", &p("specs/balance.spec")])
        .args(["--program", &p("programs/decrement.imp")])
        .args(["--relation", &p("relations/balance.rel")])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_INVALID));
    assert!(String::from_utf8_lossy(&status.stdout).contains("Invalid"));
}
