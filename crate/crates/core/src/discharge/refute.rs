//! Bounded search for integer countermodels of an abstracted formula, with
//! every candidate checked against the original quantified formula in a
//! concrete finite structure.

use std::collections::{BTreeSet, HashMap};

use crate::kb::KnowledgeBase;
use crate::lambda::{builtin, is_numeral, EvalError, FnTable, Structure, Term, Type, Value};

use super::abstraction::Abstraction;
use super::saturate::GroundFact;
use super::util::{ground_entity_terms, is_interpreted};
use super::verdict::Model;

/// Upper limit on candidates that are rebuilt into full structures.
const MAX_VALIDATIONS: usize = 5_000;

enum IExpr {
    Lit(i128),
    Var(usize),
    Bin(u8, Box<IExpr>, Box<IExpr>),
}

enum BExpr {
    Lit(bool),
    Prop(usize),
    Not(Box<BExpr>),
    Conn(u8, Box<BExpr>, Box<BExpr>),
    Cmp(u8, IExpr, IExpr),
}

struct Compiler {
    ints: Vec<String>,
    props: Vec<String>,
}

impl Compiler {
    fn int(&mut self, t: &Term) -> Result<IExpr, String> {
        if let Some(n) = t.as_int() {
            return i128::try_from(n)
                .map(IExpr::Lit)
                .map_err(|_| "literal out of range".to_string());
        }
        if let Some((op, a, b)) = t.as_binary() {
            let code = match op {
                builtin::PLUS => 0,
                builtin::MINUS => 1,
                builtin::TIMES => 2,
                _ => return Err(format!("unexpected `{op}`")),
            };
            return Ok(IExpr::Bin(code, Box::new(self.int(a)?), Box::new(self.int(b)?)));
        }
        match t {
            Term::Const(c, Type::Num) => Ok(IExpr::Var(index(&mut self.ints, c))),
            _ => Err(format!("cannot evaluate `{t}`")),
        }
    }

    fn boolean(&mut self, t: &Term) -> Result<BExpr, String> {
        if let Some(b) = t.as_bool() {
            return Ok(BExpr::Lit(b));
        }
        if let Some(a) = t.as_not() {
            return Ok(BExpr::Not(Box::new(self.boolean(a)?)));
        }
        if let Some((op, a, b)) = t.as_binary() {
            let conn = match op {
                builtin::AND => Some(0),
                builtin::OR => Some(1),
                builtin::IMPLIES => Some(2),
                _ => None,
            };
            if let Some(code) = conn {
                return Ok(BExpr::Conn(code, Box::new(self.boolean(a)?), Box::new(self.boolean(b)?)));
            }
            let cmp = match op {
                builtin::EQ => 0,
                builtin::GT => 1,
                builtin::LT => 2,
                builtin::GE => 3,
                builtin::LE => 4,
                _ => return Err(format!("unexpected `{op}`")),
            };
            return Ok(BExpr::Cmp(cmp, self.int(a)?, self.int(b)?));
        }
        match t {
            Term::Const(c, Type::Bool) => Ok(BExpr::Prop(index(&mut self.props, c))),
            _ => Err(format!("cannot evaluate `{t}`")),
        }
    }
}

fn index(names: &mut Vec<String>, n: &str) -> usize {
    match names.iter().position(|m| m == n) {
        Some(i) => i,
        None => {
            names.push(n.to_string());
            names.len() - 1
        }
    }
}

fn ieval(e: &IExpr, xs: &[i128]) -> Option<i128> {
    match e {
        IExpr::Lit(n) => Some(*n),
        IExpr::Var(i) => Some(xs[*i]),
        IExpr::Bin(op, a, b) => {
            let (a, b) = (ieval(a, xs)?, ieval(b, xs)?);
            match op {
                0 => a.checked_add(b),
                1 => a.checked_sub(b),
                _ => a.checked_mul(b),
            }
        }
    }
}

fn beval(e: &BExpr, xs: &[i128], ps: &[bool]) -> Option<bool> {
    Some(match e {
        BExpr::Lit(b) => *b,
        BExpr::Prop(i) => ps[*i],
        BExpr::Not(a) => !beval(a, xs, ps)?,
        BExpr::Conn(op, a, b) => {
            let a = beval(a, xs, ps)?;
            match op {
                0 => a && beval(b, xs, ps)?,
                1 => a || beval(b, xs, ps)?,
                _ => !a || beval(b, xs, ps)?,
            }
        }
        BExpr::Cmp(op, a, b) => {
            let (a, b) = (ieval(a, xs)?, ieval(b, xs)?);
            match op {
                0 => a == b,
                1 => a > b,
                2 => a < b,
                3 => a >= b,
                _ => a <= b,
            }
        }
    })
}

/// `0, 1, -1, 2, -2, ..., m, -m`
fn small_first(m: i128) -> Vec<i128> {
    let mut v = vec![0];
    for k in 1..=m {
        v.push(k);
        v.push(-k);
    }
    v
}

/// Visits every vector of `[-bound, bound]^n` in order of increasing
/// max-norm until `f` returns true or `budget` visits are spent. Returns
/// `Some(true)` if `f` succeeded, `Some(false)` if the space was exhausted
/// and `None` if the budget ran out first.
pub(crate) fn by_shells(
    n: usize,
    bound: i128,
    budget: &mut usize,
    mut f: impl FnMut(&[i128]) -> bool,
) -> Option<bool> {
    let mut xs = vec![0i128; n];
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    if f(&xs) {
        return Some(true);
    }
    if n == 0 {
        return Some(false);
    }
    for r in 1..=bound {
        let inner = small_first(r - 1);
        let outer = small_first(r);
        for k in 0..n {
            for edge in [r, -r] {
                let ranges: Vec<&[i128]> = (0..n)
                    .map(|i| {
                        if i < k {
                            inner.as_slice()
                        } else if i > k {
                            outer.as_slice()
                        } else {
                            &[][..]
                        }
                    })
                    .collect();
                let mut digits = vec![0usize; n];
                loop {
                    for i in 0..n {
                        xs[i] = if i == k { edge } else { ranges[i][digits[i]] };
                    }
                    if *budget == 0 {
                        return None;
                    }
                    *budget -= 1;
                    if f(&xs) {
                        return Some(true);
                    }
                    // advance the odometer over every coordinate except k
                    let mut i = 0;
                    loop {
                        if i == n {
                            break;
                        }
                        if i == k {
                            i += 1;
                            continue;
                        }
                        digits[i] += 1;
                        if digits[i] < ranges[i].len() {
                            break;
                        }
                        digits[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
        }
    }
    Some(false)
}

/// Everything needed to turn an integer assignment into a structure.
pub(crate) struct Context<'a> {
    /// The formula the model has to falsify, KB axioms included as hypotheses.
    pub original: &'a Term,
    pub ground: &'a Term,
    pub grounds: &'a [Term],
    pub facts: &'a [GroundFact],
    pub abstraction: &'a Abstraction,
    pub kb: &'a KnowledgeBase,
}

pub(crate) enum Refutation {
    Found(Model),
    Exhausted,
    OutOfBudget,
}

/// Searches `[-bound, bound]` for a falsifying assignment of the abstracted
/// formula whose concrete structure also falsifies the original.
pub(crate) fn refute(
    abstracted: &Term,
    ctx: &Context,
    bound: i128,
    budget: usize,
) -> Result<Refutation, String> {
    let mut c = Compiler {
        ints: Vec::new(),
        props: Vec::new(),
    };
    let root = c.boolean(abstracted)?;
    if c.props.len() > 12 {
        return Err(format!("{} propositional atoms", c.props.len()));
    }
    let nprops = c.props.len();
    let mut budget = budget;
    let mut validations = 0;
    let mut found = None;
    let mut ps = vec![false; nprops];
    let r = by_shells(c.ints.len(), bound, &mut budget, |xs| {
        for mask in 0..(1u32 << nprops) {
            for (i, p) in ps.iter_mut().enumerate() {
                *p = mask & (1 << i) != 0;
            }
            if beval(&root, xs, &ps) != Some(false) {
                continue;
            }
            validations += 1;
            if validations > MAX_VALIDATIONS {
                return true;
            }
            let ints: HashMap<&str, i128> =
                c.ints.iter().map(String::as_str).zip(xs.iter().copied()).collect();
            let props: HashMap<&str, bool> =
                c.props.iter().map(String::as_str).zip(ps.iter().copied()).collect();
            if let Some(m) = build_model(ctx, &ints, &props) {
                found = Some(m);
                return true;
            }
        }
        false
    });
    Ok(match (found, r) {
        (Some(m), _) => Refutation::Found(m),
        (None, Some(false)) => Refutation::Exhausted,
        _ => Refutation::OutOfBudget,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Const,
    OnEntity(usize),
    OnInt(i128),
}

/// Builds the Herbrand-style structure described by an assignment to the
/// abstracted formula; `None` when the assignment is inconsistent or the
/// structure does not falsify the original formula.
pub(crate) fn build_model(
    ctx: &Context,
    ints: &HashMap<&str, i128>,
    props: &HashMap<&str, bool>,
) -> Option<Model> {
    let mut entities: Vec<Term> = ctx.grounds.to_vec();
    for t in ground_entity_terms(ctx.ground)
        .into_iter()
        .chain(ground_entity_terms(ctx.original))
    {
        if !entities.contains(&t) {
            entities.push(t);
        }
    }
    if entities.is_empty() {
        entities.push(Term::constant("e0", Type::Entity));
    }
    let idx = |t: &Term| entities.iter().position(|e| e == t);
    let mut s = Structure {
        domain: entities.len(),
        post: (0..entities.len())
            .map(|i| idx(&Term::post(entities[i].clone())).unwrap_or(i))
            .collect(),
        ..Default::default()
    };
    for (i, e) in entities.iter().enumerate() {
        if let Term::Const(c, _) = e {
            s.consts.insert(c.clone(), Value::Entity(i));
        }
    }

    let mut symbols: Vec<(String, Type)> = Vec::new();
    for t in [ctx.original, ctx.ground] {
        t.for_each_const(&mut |n, ty| {
            if !is_interpreted(n) && n != builtin::POST && !symbols.iter().any(|(m, _)| m == n) {
                symbols.push((n.to_string(), ty.clone()));
            }
        });
    }
    for (name, ty) in &symbols {
        let default = |t: &Type| match t {
            Type::Num => Some(Value::Int(0)),
            Type::Bool => Some(Value::Bool(false)),
            _ => None,
        };
        match ty {
            Type::Entity => {
                s.consts.entry(name.clone()).or_insert(Value::Entity(0));
            }
            Type::Num | Type::Bool => {
                s.consts.insert(name.clone(), default(ty)?);
            }
            Type::Arrow(a, r) => {
                let d = default(r)?;
                let table = match **a {
                    Type::Entity => FnTable::OnEntities(vec![d; entities.len()]),
                    Type::Num => FnTable::OnInts(HashMap::new()),
                    _ => return None,
                };
                s.funcs.insert(name.clone(), table);
            }
        }
    }
    for t in [ctx.original, ctx.ground] {
        let mut pvars = BTreeSet::new();
        t.for_each_const(&mut |n, _| {
            if crate::lambda::is_program_var(n) {
                pvars.insert(n.to_string());
            }
        });
        for p in pvars {
            let v = ints.get(p.as_str()).copied().unwrap_or(0);
            s.consts.insert(p, Value::Int(v));
        }
    }

    let mut assigned: Vec<(String, Slot)> = Vec::new();
    let mut pending: Vec<(&Term, Value)> = Vec::new();
    for (t, v) in &ctx.abstraction.ints {
        if let Some(x) = ints.get(v.as_str()) {
            pending.push((t, Value::Int(*x)));
        }
    }
    for (t, v) in &ctx.abstraction.bools {
        if let Some(x) = props.get(v.as_str()) {
            pending.push((t, Value::Bool(*x)));
        }
    }
    // Abstracted terms may sit inside each other's arguments, so assign in
    // rounds until nothing changes.
    while !pending.is_empty() {
        let before = pending.len();
        let mut rest = Vec::new();
        for (t, v) in pending {
            match assign(&mut s, &mut assigned, t, v) {
                Ok(true) => {}
                Ok(false) => return None,
                Err(_) => rest.push((t, v)),
            }
        }
        if rest.len() == before {
            break;
        }
        pending = rest;
    }
    for _ in 0..=ctx.facts.len() {
        let mut progress = false;
        for f in ctx.facts {
            if let Ok(v) = s.eval(&f.rhs) {
                let key = slot_of(&s, &f.lhs);
                if let Ok(Some(k)) = key {
                    if !assigned.contains(&k) {
                        if assign(&mut s, &mut assigned, &f.lhs, v) == Ok(false) {
                            return None;
                        }
                        progress = true;
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }
    for (from, to) in ctx.kb.rewrites() {
        if let Some(t) = s.funcs.get(to).cloned() {
            s.funcs.insert(from.to_string(), t);
        }
    }

    match s.eval_bool(ctx.original) {
        Ok(false) => {}
        _ => return None,
    }
    let mut assignments: Vec<(String, String)> = Vec::new();
    let mut pv: Vec<(&String, &Value)> = s
        .consts
        .iter()
        .filter(|(n, _)| crate::lambda::is_program_var(n))
        .collect();
    pv.sort();
    for (n, v) in pv {
        assignments.push((n.clone(), show(v)));
    }
    for (t, v) in ctx.abstraction.ints.iter().chain(&ctx.abstraction.bools) {
        if t.is_program_var() {
            continue;
        }
        let val = ints
            .get(v.as_str())
            .map(|x| x.to_string())
            .or_else(|| props.get(v.as_str()).map(|b| b.to_string()));
        if let Some(val) = val {
            assignments.push((t.to_string(), val));
        }
    }
    Some(Model {
        assignments,
        structure: s,
    })
}

fn show(v: &Value) -> String {
    match v {
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Entity(e) => format!("e{e}"),
    }
}

fn slot_of(s: &Structure, t: &Term) -> Result<Option<(String, Slot)>, EvalError> {
    match t {
        Term::Const(c, _) if !is_numeral(c) => Ok(Some((c.clone(), Slot::Const))),
        Term::App(f, a) => {
            let Term::Const(name, _) = f.as_ref() else {
                return Ok(None);
            };
            match s.eval(a)? {
                Value::Entity(e) => Ok(Some((name.clone(), Slot::OnEntity(e)))),
                Value::Int(i) => Ok(Some((name.clone(), Slot::OnInt(i)))),
                Value::Bool(_) => Ok(None),
            }
        }
        _ => Ok(None),
    }
}

/// Stores `v` as the value of `t`. `Ok(false)` on a clash with an earlier
/// assignment; `Ok(true)` also when `t` has no storable slot (a nonlinear
/// product), since the final evaluation decides those.
fn assign(
    s: &mut Structure,
    assigned: &mut Vec<(String, Slot)>,
    t: &Term,
    v: Value,
) -> Result<bool, EvalError> {
    let Some((name, slot)) = slot_of(s, t)? else {
        return Ok(true);
    };
    if assigned.contains(&(name.clone(), slot)) {
        return Ok(s.eval(t)? == v);
    }
    match slot {
        Slot::Const => {
            s.consts.insert(name.clone(), v);
        }
        Slot::OnEntity(e) => match s.funcs.get_mut(&name) {
            Some(FnTable::OnEntities(vals)) if e < vals.len() => vals[e] = v,
            _ => return Ok(true),
        },
        Slot::OnInt(i) => match s.funcs.get_mut(&name) {
            Some(FnTable::OnInts(map)) => {
                map.insert(i, v);
            }
            _ => return Ok(true),
        },
    }
    assigned.push((name, slot));
    Ok(true)
}
