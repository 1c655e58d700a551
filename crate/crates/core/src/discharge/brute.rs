//! Exhaustive finite-model checking, the independent oracle for `decide`.

use std::collections::HashMap;

use crate::lambda::{builtin, is_numeral, EvalError, FnTable, Signature, Structure, Term, Type, Value};

use super::verdict::Model;

/// Default cap on the number of structures examined.
pub const BRUTE_FORCE_BUDGET: u128 = 20_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundedVerdict {
    ValidInBounds,
    Invalid(Model),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BruteForceError {
    #[error("{0} structures exceed the evaluation budget")]
    CostExceeded(u128),
    #[error("cannot enumerate interpretations of `{0}`")]
    Unsupported(String),
}

#[derive(Clone, Debug)]
enum Sym {
    Num(String),
    Bool(String),
    Entity(String),
    /// `(name, argument domain, result)`
    Func(String, ArgDom, Type),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum ArgDom {
    Entity,
    Int,
}

/// Checks `formula` in every structure with 1 to `entity_domain_size`
/// entities and every integer in `[-num_bound, num_bound]`.
pub fn brute_force(
    formula: &Term,
    num_bound: i64,
    entity_domain_size: usize,
) -> Result<BoundedVerdict, BruteForceError> {
    brute_force_with_budget(formula, num_bound, entity_domain_size, BRUTE_FORCE_BUDGET)
}

pub fn brute_force_with_budget(
    formula: &Term,
    num_bound: i64,
    entity_domain_size: usize,
    budget: u128,
) -> Result<BoundedVerdict, BruteForceError> {
    let mut syms: Vec<Sym> = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    let mut unsupported = None;
    let mut uses_post = false;
    formula.for_each_const(&mut |n, ty| {
        if n == builtin::POST {
            uses_post = true;
            return;
        }
        if Signature::is_builtin(n) || is_numeral(n) || seen.iter().any(|s| s == n) {
            return;
        }
        seen.push(n.to_string());
        let sym = match ty {
            Type::Num => Sym::Num(n.into()),
            Type::Bool => Sym::Bool(n.into()),
            Type::Entity => Sym::Entity(n.into()),
            Type::Arrow(a, r) if r.is_base() => match **a {
                Type::Entity => Sym::Func(n.into(), ArgDom::Entity, (**r).clone()),
                Type::Num => Sym::Func(n.into(), ArgDom::Int, (**r).clone()),
                _ => {
                    unsupported.get_or_insert(n.to_string());
                    return;
                }
            },
            _ => {
                unsupported.get_or_insert(n.to_string());
                return;
            }
        };
        syms.push(sym);
    });
    if let Some(n) = unsupported {
        return Err(BruteForceError::Unsupported(n));
    }
    if uses_post {
        syms.push(Sym::Func(builtin::POST.into(), ArgDom::Entity, Type::Entity));
    }
    let width = (2 * num_bound + 1) as u128;
    let ints: Vec<i128> = (-(num_bound as i128)..=num_bound as i128).collect();

    // One digit per atomic choice; `radix[i]` is that digit's range.
    let layout = |n: usize| -> Vec<u128> {
        let mut radix = Vec::new();
        for s in &syms {
            match s {
                Sym::Num(_) => radix.push(width),
                Sym::Bool(_) => radix.push(2),
                Sym::Entity(_) => radix.push(n as u128),
                Sym::Func(_, dom, r) => {
                    let slots = match dom {
                        ArgDom::Entity => n as u128,
                        ArgDom::Int => width,
                    };
                    let range = match r {
                        Type::Num => width,
                        Type::Bool => 2,
                        _ => n as u128,
                    };
                    for _ in 0..slots {
                        radix.push(range);
                    }
                }
            }
        }
        radix
    };
    let mut total: u128 = 0;
    for n in 1..=entity_domain_size.max(1) {
        let c = layout(n)
            .iter()
            .try_fold(1u128, |acc, r| acc.checked_mul(*r))
            .unwrap_or(u128::MAX);
        total = total.saturating_add(c);
    }
    if total > budget {
        return Err(BruteForceError::CostExceeded(total));
    }

    for n in 1..=entity_domain_size.max(1) {
        let radix = layout(n);
        let mut digits = vec![0u128; radix.len()];
        loop {
            let s = structure(&syms, &digits, n, &ints);
            match s.eval_bool(formula) {
                Ok(false) => return Ok(BoundedVerdict::Invalid(model(&syms, s))),
                Ok(true) | Err(EvalError::Undefined(_)) | Err(EvalError::Overflow) => {}
                Err(e) => return Err(BruteForceError::Unsupported(e.to_string())),
            }
            let mut i = 0;
            while i < radix.len() {
                digits[i] += 1;
                if digits[i] < radix[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == radix.len() {
                break;
            }
        }
    }
    Ok(BoundedVerdict::ValidInBounds)
}

fn structure(syms: &[Sym], digits: &[u128], n: usize, ints: &[i128]) -> Structure {
    let mut s = Structure {
        domain: n,
        ..Default::default()
    };
    let mut d = digits.iter().copied();
    let mut next = || d.next().expect("digit") as usize;
    for sym in syms {
        match sym {
            Sym::Num(name) => {
                s.consts.insert(name.clone(), Value::Int(ints[next()]));
            }
            Sym::Bool(name) => {
                s.consts.insert(name.clone(), Value::Bool(next() == 1));
            }
            Sym::Entity(name) => {
                s.consts.insert(name.clone(), Value::Entity(next()));
            }
            Sym::Func(name, dom, r) => {
                let val = |k: usize| match r {
                    Type::Num => Value::Int(ints[k]),
                    Type::Bool => Value::Bool(k == 1),
                    _ => Value::Entity(k),
                };
                match dom {
                    ArgDom::Entity => {
                        let vals: Vec<Value> = (0..n).map(|_| val(next())).collect();
                        if name == builtin::POST {
                            s.post = vals
                                .iter()
                                .map(|v| match v {
                                    Value::Entity(e) => *e,
                                    _ => 0,
                                })
                                .collect();
                        } else {
                            s.funcs.insert(name.clone(), FnTable::OnEntities(vals));
                        }
                    }
                    ArgDom::Int => {
                        let map: HashMap<i128, Value> =
                            ints.iter().map(|&x| (x, val(next()))).collect();
                        s.funcs.insert(name.clone(), FnTable::OnInts(map));
                    }
                }
            }
        }
    }
    s
}

fn show(v: &Value) -> String {
    match v {
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Entity(e) => format!("e{e}"),
    }
}

fn model(syms: &[Sym], s: Structure) -> Model {
    let mut assignments = Vec::new();
    for sym in syms {
        match sym {
            Sym::Num(n) | Sym::Bool(n) | Sym::Entity(n) => {
                assignments.push((n.clone(), show(&s.consts[n])));
            }
            Sym::Func(n, ArgDom::Entity, _) if n == builtin::POST => {
                let vals: Vec<String> = s.post.iter().map(|e| format!("e{e}")).collect();
                assignments.push((n.clone(), format!("[{}]", vals.join(", "))));
            }
            Sym::Func(n, _, _) => match &s.funcs[n] {
                FnTable::OnEntities(vals) => {
                    let vals: Vec<String> = vals.iter().map(show).collect();
                    assignments.push((n.clone(), format!("[{}]", vals.join(", "))));
                }
                FnTable::OnInts(map) => {
                    let mut pts: Vec<(&i128, &Value)> = map.iter().collect();
                    pts.sort();
                    let vals: Vec<String> =
                        pts.iter().map(|(k, v)| format!("{k}:{}", show(v))).collect();
                    assignments.push((n.clone(), format!("{{{}}}", vals.join(", "))));
                }
            },
        }
    }
    Model {
        assignments,
        structure: s,
    }
}
