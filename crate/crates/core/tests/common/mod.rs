//! Shared fixtures and generators for the integration and acceptance tests.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nhl::discharge::{decide_formula, DecideOptions, Verdict};
use nhl::hoare::{build_triple, generate_vcs, load_relation, HoareTriple, LfplRelation, Vc};
use nhl::imp::{embed, parse_program, BinOp, PExpr, PState, Stmt};
use nhl::kb::{load_kb, KnowledgeBase};
use nhl::lambda::{builtin, Signature, Term, Type};
use nhl::semparse::{Grammar, SpecForm};

pub fn data_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

pub fn data(rel: &str) -> String {
    std::fs::read_to_string(data_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// `NHL_SEED` fixes every random corpus; the default keeps runs reproducible.
pub fn seed() -> u64 {
    std::env::var("NHL_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x6e686c)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

// ---------------------------------------------------------------------------
// Shipped verification instances

pub struct Instance {
    pub name: &'static str,
    pub spec: &'static str,
    pub program: &'static str,
    pub relation: &'static str,
    pub kb: Option<&'static str>,
    /// Whether every VC should come out Valid.
    pub expect_valid: bool,
}

pub const INSTANCES: &[Instance] = &[
    Instance { name: "invariant", spec: "specs/balance.spec", program: "programs/increment.imp", relation: "relations/balance.rel", kb: None, expect_valid: true },
    Instance { name: "off-by-one", spec: "specs/balance.spec", program: "programs/decrement.imp", relation: "relations/balance.rel", kb: None, expect_valid: false },
    Instance { name: "values", spec: "specs/values.spec", program: "programs/increment.imp", relation: "relations/values.rel", kb: None, expect_valid: true },
    Instance { name: "imperative", spec: "specs/increment.spec", program: "programs/increment.imp", relation: "relations/balance.rel", kb: None, expect_valid: true },
    Instance { name: "conditional", spec: "specs/conditional.spec", program: "programs/conditional.imp", relation: "relations/balance.rel", kb: None, expect_valid: true },
    Instance { name: "prepost", spec: "specs/prepost.spec", program: "programs/increment.imp", relation: "relations/balance.rel", kb: None, expect_valid: true },
    Instance { name: "summation", spec: "specs/totals.spec", program: "programs/sum.imp", relation: "relations/total.rel", kb: None, expect_valid: true },
    Instance { name: "kb-values", spec: "specs/values.spec", program: "programs/increment.imp", relation: "relations/balance.rel", kb: Some("kb/balance_valueof.kb"), expect_valid: true },
];

pub struct Loaded {
    pub grammar: Grammar,
    pub form: SpecForm,
    pub relation: LfplRelation,
    pub program: Stmt,
    pub kb: KnowledgeBase,
    pub triple: HoareTriple,
    pub vcs: Vec<Vc>,
}

/// Top-1 reading of the single line of a spec file.
pub fn spec_form(g: &Grammar, rel: &str) -> SpecForm {
    let text = data(rel);
    let lines = nhl::semparse::parse_spec_file(&text);
    assert_eq!(lines.len(), 1, "{rel}");
    g.parse_spec(&lines[0].text, 5).unwrap()[0].form.clone()
}

pub fn load(inst: &Instance) -> Loaded {
    let grammar = Grammar::builtin();
    let form = spec_form(&grammar, inst.spec);
    let relation = load_relation(&data(inst.relation), &grammar.signature).unwrap();
    let program = parse_program(&data(inst.program)).unwrap();
    let kb = inst
        .kb
        .map(|k| load_kb(&data(k), &grammar.signature).unwrap())
        .unwrap_or_default();
    let triple = build_triple(&kb.normalize_spec(&form), &kb.normalize_relation(&relation), &program).unwrap();
    let vcs = generate_vcs(&triple);
    Loaded { grammar, form, relation, program, kb, triple, vcs }
}

pub fn decide_all(l: &Loaded) -> Vec<Verdict> {
    l.vcs
        .iter()
        .map(|vc| decide_formula(&vc.formula, &l.kb, &DecideOptions::default()))
        .collect()
}

// ---------------------------------------------------------------------------
// Random loop-free programs over three variables

pub const VARS: [&str; 3] = ["_x", "_y", "_z"];

pub fn int_expr(r: &mut ChaCha8Rng, depth: u32) -> PExpr {
    if depth == 0 || r.gen_bool(0.4) {
        return if r.gen_bool(0.6) {
            PExpr::var(VARS[r.gen_range(0..VARS.len())])
        } else {
            PExpr::int(r.gen_range(-3..=3))
        };
    }
    match r.gen_range(0..7) {
        0 => PExpr::Neg(Box::new(int_expr(r, depth - 1))),
        1 => PExpr::bin(BinOp::Mul, int_expr(r, depth - 1), int_expr(r, depth - 1)),
        2 | 3 => PExpr::bin(BinOp::Sub, int_expr(r, depth - 1), int_expr(r, depth - 1)),
        _ => PExpr::bin(BinOp::Add, int_expr(r, depth - 1), int_expr(r, depth - 1)),
    }
}

pub fn bool_expr(r: &mut ChaCha8Rng, depth: u32) -> PExpr {
    if depth == 0 || r.gen_bool(0.5) {
        if r.gen_bool(0.05) {
            return PExpr::Bool(r.gen_bool(0.5));
        }
        let ops = [BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge];
        let op = ops[r.gen_range(0..ops.len())];
        return PExpr::bin(op, int_expr(r, 1), int_expr(r, 1));
    }
    match r.gen_range(0..3) {
        0 => PExpr::not(bool_expr(r, depth - 1)),
        1 => PExpr::bin(BinOp::And, bool_expr(r, depth - 1), bool_expr(r, depth - 1)),
        _ => PExpr::bin(BinOp::Or, bool_expr(r, depth - 1), bool_expr(r, depth - 1)),
    }
}

/// A loop-free program of at most `budget` statements, counting each
/// assignment, `skip` and conditional as one.
pub fn program(r: &mut ChaCha8Rng, budget: usize) -> Stmt {
    let mut left = r.gen_range(1..=budget);
    block(r, &mut left)
}

fn block(r: &mut ChaCha8Rng, left: &mut usize) -> Stmt {
    let mut stmts = Vec::new();
    while *left > 0 {
        stmts.push(statement(r, left));
        if r.gen_bool(0.3) {
            break;
        }
    }
    Stmt::block(stmts)
}

fn statement(r: &mut ChaCha8Rng, left: &mut usize) -> Stmt {
    *left -= 1;
    let roll = r.gen_range(0..10);
    if roll < 2 && *left >= 1 {
        let c = bool_expr(r, 1);
        let t = block(r, left);
        let e = if *left > 0 && r.gen_bool(0.6) { block(r, left) } else { Stmt::Skip };
        Stmt::if_(c, t, e)
    } else if roll == 2 {
        Stmt::Skip
    } else {
        Stmt::assign(VARS[r.gen_range(0..VARS.len())], int_expr(r, 2))
    }
}

/// Statements counted as in [`program`].
pub fn statement_count(s: &Stmt) -> usize {
    match s {
        Stmt::Skip | Stmt::Assign(..) => 1,
        Stmt::Seq(a, b) => statement_count(a) + statement_count(b),
        // An omitted else branch is not a statement of its own.
        Stmt::If(_, a, b) if **b == Stmt::Skip => 1 + statement_count(a),
        Stmt::If(_, a, b) => 1 + statement_count(a) + statement_count(b),
        Stmt::While { body, .. } => 1 + statement_count(body),
    }
}

pub fn states(lo: i64, hi: i64) -> Vec<PState> {
    let mut out = Vec::new();
    for x in lo..=hi {
        for y in lo..=hi {
            for z in lo..=hi {
                out.push(PState::new().with("_x", x).with("_y", y).with("_z", z));
            }
        }
    }
    out
}

/// Arbitrary-precision evaluation of a quantifier-free formula over program
/// variables. Written independently of the library's evaluators so that it
/// can serve as an oracle for them.
pub fn eval_formula(t: &Term, st: &PState) -> bool {
    match value(t, st) {
        Val::B(b) => b,
        Val::I(_) => panic!("not a formula: {t}"),
    }
}

enum Val {
    I(BigInt),
    B(bool),
}

fn value(t: &Term, st: &PState) -> Val {
    if let Some(a) = t.as_not() {
        return Val::B(!eval_formula(a, st));
    }
    if let Some((op, a, b)) = t.as_binary() {
        let int = |x: &Term| match value(x, st) {
            Val::I(n) => n,
            Val::B(_) => panic!("not an integer: {x}"),
        };
        return match op {
            builtin::AND => Val::B(eval_formula(a, st) && eval_formula(b, st)),
            builtin::OR => Val::B(eval_formula(a, st) || eval_formula(b, st)),
            builtin::IMPLIES => Val::B(!eval_formula(a, st) || eval_formula(b, st)),
            builtin::PLUS => Val::I(int(a) + int(b)),
            builtin::MINUS => Val::I(int(a) - int(b)),
            builtin::TIMES => Val::I(int(a) * int(b)),
            builtin::EQ => Val::B(int(a) == int(b)),
            builtin::LT => Val::B(int(a) < int(b)),
            builtin::LE => Val::B(int(a) <= int(b)),
            builtin::GT => Val::B(int(a) > int(b)),
            builtin::GE => Val::B(int(a) >= int(b)),
            _ => panic!("unexpected operator {op}"),
        };
    }
    match t {
        Term::Const(c, _) if c == builtin::TRUE => Val::B(true),
        Term::Const(c, _) if c == builtin::FALSE => Val::B(false),
        Term::Const(c, _) if c.starts_with('_') => {
            Val::I(st.get(c).cloned().unwrap_or_else(|| panic!("unbound {c}")))
        }
        Term::Const(c, _) => Val::I(c.parse().unwrap_or_else(|_| panic!("not a literal: {c}"))),
        _ => panic!("cannot evaluate {t}"),
    }
}

pub fn post_condition(r: &mut ChaCha8Rng) -> (PExpr, Term) {
    let q = bool_expr(r, 2);
    let t = embed(&q);
    (q, t)
}

// ---------------------------------------------------------------------------
// Random quantifier-free linear formulas

pub const LIA_VARS: [&str; 3] = ["_a", "_b", "_c"];

fn lia_term(r: &mut ChaCha8Rng) -> Term {
    let mut t: Option<Term> = None;
    for v in LIA_VARS {
        if r.gen_bool(0.5) {
            let k: i64 = r.gen_range(-3..=3);
            if k == 0 {
                continue;
            }
            let m = if k == 1 { Term::pvar(v) } else { Term::times(Term::int(k), Term::pvar(v)) };
            t = Some(match t {
                None => m,
                Some(acc) => Term::plus(acc, m),
            });
        }
    }
    let c = Term::int(r.gen_range(-4..=4));
    match t {
        None => c,
        Some(acc) if r.gen_bool(0.5) => Term::plus(acc, c),
        Some(acc) => acc,
    }
}

fn lia_atom(r: &mut ChaCha8Rng) -> Term {
    let ops = [builtin::EQ, builtin::LT, builtin::LE, builtin::GT, builtin::GE];
    Term::binop(ops[r.gen_range(0..ops.len())], lia_term(r), lia_term(r))
}

fn lia_formula_at(r: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 || r.gen_bool(0.35) {
        return lia_atom(r);
    }
    let a = lia_formula_at(r, depth - 1);
    let b = lia_formula_at(r, depth - 1);
    match r.gen_range(0..4) {
        0 => Term::and(a, b),
        1 => Term::or(a, b),
        2 => Term::implies(a, b),
        _ => Term::not(a),
    }
}

/// Mixes arbitrary formulas with shapes that are valid by construction, so
/// that both verdicts are exercised.
pub fn lia_formula(r: &mut ChaCha8Rng) -> Term {
    let a = lia_formula_at(r, 3);
    match r.gen_range(0..4) {
        0 => Term::implies(a.clone(), Term::or(a, lia_formula_at(r, 2))),
        1 => Term::implies(Term::and(a, lia_formula_at(r, 2)), lia_formula_at(r, 1)),
        _ => a,
    }
}

/// A signature with `f : Num -> Num`, used for congruence formulas.
pub fn congruence_signature() -> Signature {
    let mut s = Signature::new();
    s.declare("f", Type::arrow(Type::Num, Type::Num)).unwrap();
    s
}

/// Valid formulas that need congruence reasoning, which the prover lacks.
pub const CONGRUENCE_CASES: [&str; 2] = [
    "_a = _b => f(_a) = f(_b)",
    "_a = _b + 1 && f(_a) > 0 => f(_b + 1) > 0",
];
