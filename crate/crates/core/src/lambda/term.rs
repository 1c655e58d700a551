use std::fmt;

use num_bigint::BigInt;

use super::types::{builtin, is_numeral, is_program_var, Type};

/// A simply-typed lambda term. Every variable and constant carries its type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String, Type),
    Const(String, Type),
    Abs(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
}

/// The two Entity quantifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn name(self) -> &'static str {
        match self {
            Quantifier::Forall => builtin::FORALL,
            Quantifier::Exists => builtin::EXISTS,
        }
    }

    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

fn quant_type() -> Type {
    Type::arrow(Type::arrow(Type::Entity, Type::Bool), Type::Bool)
}

fn bool2() -> Type {
    Type::curried([Type::Bool, Type::Bool], Type::Bool)
}

fn num2(result: Type) -> Type {
    Type::curried([Type::Num, Type::Num], result)
}

impl Term {
    pub fn var(name: impl Into<String>, ty: Type) -> Term {
        Term::Var(name.into(), ty)
    }

    pub fn constant(name: impl Into<String>, ty: Type) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn abs(name: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Abs(name.into(), ty, Box::new(body))
    }

    pub fn app(f: Term, arg: Term) -> Term {
        Term::App(Box::new(f), Box::new(arg))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn int(value: impl Into<BigInt>) -> Term {
        Term::Const(value.into().to_string(), Type::Num)
    }

    /// A program variable such as `_balance`.
    pub fn pvar(name: impl Into<String>) -> Term {
        Term::Const(name.into(), Type::Num)
    }

    pub fn tt() -> Term {
        Term::Const(builtin::TRUE.into(), Type::Bool)
    }

    pub fn ff() -> Term {
        Term::Const(builtin::FALSE.into(), Type::Bool)
    }

    pub fn bool_lit(b: bool) -> Term {
        if b {
            Term::tt()
        } else {
            Term::ff()
        }
    }

    pub fn quant(q: Quantifier, var: impl Into<String>, body: Term) -> Term {
        Term::app(
            Term::Const(q.name().into(), quant_type()),
            Term::abs(var, Type::Entity, body),
        )
    }

    pub fn forall(var: impl Into<String>, body: Term) -> Term {
        Term::quant(Quantifier::Forall, var, body)
    }

    pub fn exists(var: impl Into<String>, body: Term) -> Term {
        Term::quant(Quantifier::Exists, var, body)
    }

    fn bool_op(op: &str, a: Term, b: Term) -> Term {
        Term::apps(Term::Const(op.into(), bool2()), [a, b])
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::bool_op(builtin::AND, a, b)
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::bool_op(builtin::OR, a, b)
    }

    pub fn implies(a: Term, b: Term) -> Term {
        Term::bool_op(builtin::IMPLIES, a, b)
    }

    pub fn not(a: Term) -> Term {
        Term::app(
            Term::Const(builtin::NOT.into(), Type::arrow(Type::Bool, Type::Bool)),
            a,
        )
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn conj<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        let mut items: Vec<Term> = terms.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Term::tt();
        };
        while let Some(t) = items.pop() {
            acc = Term::and(t, acc);
        }
        acc
    }

    /// Right-nested disjunction; `false` when empty.
    pub fn disj<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        let mut items: Vec<Term> = terms.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Term::ff();
        };
        while let Some(t) = items.pop() {
            acc = Term::or(t, acc);
        }
        acc
    }

    /// Binary operator application `op(a, b)` for comparison or arithmetic names.
    pub fn binop(op: &str, a: Term, b: Term) -> Term {
        let ty = if builtin::COMPARISONS.contains(&op) {
            num2(Type::Bool)
        } else if builtin::ARITH.contains(&op) {
            num2(Type::Num)
        } else {
            bool2()
        };
        Term::apps(Term::Const(op.into(), ty), [a, b])
    }

    pub fn eq(a: Term, b: Term) -> Term {
        Term::binop(builtin::EQ, a, b)
    }

    pub fn gt(a: Term, b: Term) -> Term {
        Term::binop(builtin::GT, a, b)
    }

    pub fn lt(a: Term, b: Term) -> Term {
        Term::binop(builtin::LT, a, b)
    }

    pub fn ge(a: Term, b: Term) -> Term {
        Term::binop(builtin::GE, a, b)
    }

    pub fn le(a: Term, b: Term) -> Term {
        Term::binop(builtin::LE, a, b)
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::binop(builtin::PLUS, a, b)
    }

    pub fn minus(a: Term, b: Term) -> Term {
        Term::binop(builtin::MINUS, a, b)
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::binop(builtin::TIMES, a, b)
    }

    pub fn post(a: Term) -> Term {
        Term::app(
            Term::Const(builtin::POST.into(), Type::arrow(Type::Entity, Type::Entity)),
            a,
        )
    }

    /// `f(arg)` for a unary domain function declared as `Entity -> result`.
    pub fn call(f: &str, arg_ty: Type, result: Type, arg: Term) -> Term {
        Term::app(Term::Const(f.into(), Type::arrow(arg_ty, result)), arg)
    }

    // ----- accessors -----

    pub fn const_name(&self) -> Option<&str> {
        match self {
            Term::Const(n, _) => Some(n),
            _ => None,
        }
    }

    pub fn is_const(&self, name: &str) -> bool {
        self.const_name() == Some(name)
    }

    pub fn is_true(&self) -> bool {
        self.is_const(builtin::TRUE)
    }

    pub fn is_false(&self) -> bool {
        self.is_const(builtin::FALSE)
    }

    pub fn as_int(&self) -> Option<BigInt> {
        match self {
            Term::Const(n, Type::Num) if is_numeral(n) => n.parse().ok(),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        if self.is_true() {
            Some(true)
        } else if self.is_false() {
            Some(false)
        } else {
            None
        }
    }

    pub fn is_program_var(&self) -> bool {
        matches!(self, Term::Const(n, Type::Num) if is_program_var(n))
    }

    /// Head and arguments of a spine `h a1 ... an`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f.as_ref();
        }
        args.reverse();
        (cur, args)
    }

    /// `op(a, b)` where `op` is a constant.
    pub fn as_binary(&self) -> Option<(&str, &Term, &Term)> {
        if let Term::App(f, b) = self {
            if let Term::App(op, a) = f.as_ref() {
                if let Term::Const(name, _) = op.as_ref() {
                    return Some((name, a, b));
                }
            }
        }
        None
    }

    pub fn as_unary(&self) -> Option<(&str, &Term)> {
        if let Term::App(f, a) = self {
            if let Term::Const(name, _) = f.as_ref() {
                return Some((name, a));
            }
        }
        None
    }

    pub fn as_not(&self) -> Option<&Term> {
        match self.as_unary() {
            Some((builtin::NOT, a)) => Some(a),
            _ => None,
        }
    }

    pub fn as_and(&self) -> Option<(&Term, &Term)> {
        match self.as_binary() {
            Some((builtin::AND, a, b)) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_implies(&self) -> Option<(&Term, &Term)> {
        match self.as_binary() {
            Some((builtin::IMPLIES, a, b)) => Some((a, b)),
            _ => None,
        }
    }

    /// `forall x. body` / `exists x. body` as (quantifier, binder, binder type, body).
    pub fn as_quant(&self) -> Option<(Quantifier, &str, &Type, &Term)> {
        if let Term::App(f, a) = self {
            let q = match f.as_ref() {
                Term::Const(n, _) if n == builtin::FORALL => Quantifier::Forall,
                Term::Const(n, _) if n == builtin::EXISTS => Quantifier::Exists,
                _ => return None,
            };
            if let Term::Abs(x, ty, body) = a.as_ref() {
                return Some((q, x, ty, body));
            }
        }
        None
    }

    /// Flattens nested conjunctions into their conjuncts.
    pub fn conjuncts(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            if let Some((a, b)) = t.as_and() {
                go(a, out);
                go(b, out);
            } else {
                out.push(t);
            }
        }
        go(self, &mut out);
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(..) | Term::Const(..) => 1,
            Term::Abs(_, _, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Visits every constant occurrence.
    pub fn for_each_const<'a>(&'a self, f: &mut impl FnMut(&'a str, &'a Type)) {
        match self {
            Term::Const(n, t) => f(n, t),
            Term::Var(..) => {}
            Term::Abs(_, _, b) => b.for_each_const(f),
            Term::App(g, a) => {
                g.for_each_const(f);
                a.for_each_const(f);
            }
        }
    }

    pub fn mentions_const(&self, name: &str) -> bool {
        let mut found = false;
        self.for_each_const(&mut |n, _| found |= n == name);
        found
    }

    /// True iff `sub` occurs syntactically inside `self`.
    pub fn contains(&self, sub: &Term) -> bool {
        if self == sub {
            return true;
        }
        match self {
            Term::Abs(_, _, b) => b.contains(sub),
            Term::App(f, a) => f.contains(sub) || a.contains(sub),
            _ => false,
        }
    }

    /// Replaces every syntactic occurrence of `from` by `to`. Only meant for
    /// ground `from` terms, so no capture can arise.
    pub fn replace(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        match self {
            Term::Abs(x, ty, b) => Term::Abs(x.clone(), ty.clone(), Box::new(b.replace(from, to))),
            Term::App(f, a) => Term::app(f.replace(from, to), a.replace(from, to)),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::syntax::print(self))
    }
}
