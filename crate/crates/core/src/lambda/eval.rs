//! Evaluation of first-order formulas in finite structures.
//!
//! Used as the ground-truth oracle by the bounded model finder, by
//! counterexample validation, and by property tests.

use std::collections::HashMap;

use super::term::{Quantifier, Term};
use super::types::{builtin, is_numeral};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i128),
    Bool(bool),
    Entity(usize),
}

/// Interpretation of a unary domain function.
#[derive(Clone, Debug, PartialEq)]
pub enum FnTable {
    /// Indexed by entity.
    OnEntities(Vec<Value>),
    /// Partial table on integer arguments; missing points are undefined.
    OnInts(HashMap<i128, Value>),
}

/// A finite first-order structure over entities `0..domain`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Structure {
    pub domain: usize,
    /// Interpretation of `post`; empty when the formula does not use it.
    pub post: Vec<usize>,
    /// Nullary constants: program variables, entity constants, Skolem witnesses.
    pub consts: HashMap<String, Value>,
    pub funcs: HashMap<String, FnTable>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no interpretation for `{0}`")]
    Unbound(String),
    #[error("integer overflow")]
    Overflow,
    #[error("`{0}` is undefined at the given argument")]
    Undefined(String),
    #[error("cannot evaluate `{0}`")]
    Unsupported(String),
    #[error("type error while evaluating `{0}`")]
    Type(String),
}

impl Structure {
    pub fn eval_bool(&self, term: &Term) -> Result<bool, EvalError> {
        match self.eval(term)? {
            Value::Bool(b) => Ok(b),
            _ => Err(EvalError::Type(term.to_string())),
        }
    }

    pub fn eval(&self, term: &Term) -> Result<Value, EvalError> {
        let mut env = Vec::new();
        self.ev(term, &mut env)
    }

    fn int(&self, term: &Term, env: &mut Vec<(String, usize)>) -> Result<i128, EvalError> {
        match self.ev(term, env)? {
            Value::Int(v) => Ok(v),
            _ => Err(EvalError::Type(term.to_string())),
        }
    }

    fn boolean(&self, term: &Term, env: &mut Vec<(String, usize)>) -> Result<bool, EvalError> {
        match self.ev(term, env)? {
            Value::Bool(v) => Ok(v),
            _ => Err(EvalError::Type(term.to_string())),
        }
    }

    fn ev(&self, term: &Term, env: &mut Vec<(String, usize)>) -> Result<Value, EvalError> {
        if let Some((q, x, _, body)) = term.as_quant() {
            for e in 0..self.domain {
                env.push((x.to_string(), e));
                let r = self.boolean(body, env);
                env.pop();
                let r = r?;
                match q {
                    Quantifier::Forall if !r => return Ok(Value::Bool(false)),
                    Quantifier::Exists if r => return Ok(Value::Bool(true)),
                    _ => {}
                }
            }
            return Ok(Value::Bool(q == Quantifier::Forall));
        }
        if let Some((op, a, b)) = term.as_binary() {
            match op {
                builtin::AND => {
                    return Ok(Value::Bool(self.boolean(a, env)? && self.boolean(b, env)?))
                }
                builtin::OR => {
                    return Ok(Value::Bool(self.boolean(a, env)? || self.boolean(b, env)?))
                }
                builtin::IMPLIES => {
                    return Ok(Value::Bool(!self.boolean(a, env)? || self.boolean(b, env)?))
                }
                builtin::EQ | builtin::GT | builtin::LT | builtin::GE | builtin::LE => {
                    let x = self.int(a, env)?;
                    let y = self.int(b, env)?;
                    return Ok(Value::Bool(match op {
                        builtin::EQ => x == y,
                        builtin::GT => x > y,
                        builtin::LT => x < y,
                        builtin::GE => x >= y,
                        _ => x <= y,
                    }));
                }
                builtin::PLUS | builtin::MINUS | builtin::TIMES => {
                    let x = self.int(a, env)?;
                    let y = self.int(b, env)?;
                    let r = match op {
                        builtin::PLUS => x.checked_add(y),
                        builtin::MINUS => x.checked_sub(y),
                        _ => x.checked_mul(y),
                    };
                    return r.map(Value::Int).ok_or(EvalError::Overflow);
                }
                _ => {}
            }
        }
        match term {
            Term::Var(x, _) => env
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, e)| Value::Entity(*e))
                .ok_or_else(|| EvalError::Unbound(x.clone())),
            Term::Const(c, _) => {
                if c == builtin::TRUE {
                    Ok(Value::Bool(true))
                } else if c == builtin::FALSE {
                    Ok(Value::Bool(false))
                } else if is_numeral(c) {
                    c.parse::<i128>()
                        .map(Value::Int)
                        .map_err(|_| EvalError::Overflow)
                } else {
                    self.consts
                        .get(c)
                        .copied()
                        .ok_or_else(|| EvalError::Unbound(c.clone()))
                }
            }
            Term::App(f, a) => {
                let Term::Const(name, _) = f.as_ref() else {
                    return Err(EvalError::Unsupported(term.to_string()));
                };
                if name == builtin::NOT {
                    return Ok(Value::Bool(!self.boolean(a, env)?));
                }
                let arg = self.ev(a, env)?;
                if name == builtin::POST {
                    let Value::Entity(e) = arg else {
                        return Err(EvalError::Type(term.to_string()));
                    };
                    return self
                        .post
                        .get(e)
                        .map(|p| Value::Entity(*p))
                        .ok_or_else(|| EvalError::Unbound(builtin::POST.into()));
                }
                let table = self
                    .funcs
                    .get(name)
                    .ok_or_else(|| EvalError::Unbound(name.clone()))?;
                match (table, arg) {
                    (FnTable::OnEntities(vals), Value::Entity(e)) => vals
                        .get(e)
                        .copied()
                        .ok_or_else(|| EvalError::Undefined(name.clone())),
                    (FnTable::OnInts(map), Value::Int(i)) => map
                        .get(&i)
                        .copied()
                        .ok_or_else(|| EvalError::Undefined(name.clone())),
                    _ => Err(EvalError::Type(term.to_string())),
                }
            }
            Term::Abs(..) => Err(EvalError::Unsupported(term.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::types::Type;

    #[test]
    fn evaluates_quantifiers_over_the_domain() {
        let x = Term::var("x", Type::Entity);
        let f = Term::forall(
            "x",
            Term::gt(Term::call("balance", Type::Entity, Type::Num, x), Term::int(0)),
        );
        let mut s = Structure {
            domain: 2,
            ..Default::default()
        };
        s.funcs.insert(
            "balance".into(),
            FnTable::OnEntities(vec![Value::Int(1), Value::Int(3)]),
        );
        assert!(s.eval_bool(&f).unwrap());
        s.funcs.insert(
            "balance".into(),
            FnTable::OnEntities(vec![Value::Int(1), Value::Int(0)]),
        );
        assert!(!s.eval_bool(&f).unwrap());
    }

    #[test]
    fn missing_constants_are_reported() {
        let s = Structure::default();
        assert_eq!(
            s.eval(&Term::pvar("_x")),
            Err(EvalError::Unbound("_x".into()))
        );
    }
}
