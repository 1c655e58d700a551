//! Canonical plain-text syntax for terms.
//!
//! ```text
//! forall x. balance(x) > 0
//! exists x. balance(post(x)) = _balance
//! lam f: Entity -> Num. forall x. f(post(x)) = f(x) + 1
//! ```
//!
//! Connectives are `&&`, `||`, `=>` and `!`; comparisons `= != < <= > >=`;
//! arithmetic `+ - *`. Binder annotations are optional on input: missing
//! types are inferred by unification and default to `Entity`. The printer
//! always annotates `lam` binders so that printing then parsing yields an
//! alpha-equal term.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::ops::TypeError;
use super::term::{Quantifier, Term};
use super::types::{builtin, is_program_var, Signature, Type};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SyntaxError {
    #[error("at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("unbound variable `{0}` (free variables are not allowed here)")]
    FreeVariable(String),
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Sym(&'static str),
}

const SYMBOLS: [&str; 19] = [
    "->", "=>", "&&", "||", "!=", "<=", ">=", "(", ")", ",", ".", ":", "!", "=", "<", ">", "+",
    "-", "*",
];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' || c == '#' {
            let start = i;
            i += 1;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
            continue;
        }
        let rest = &src[i..];
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push((i, Tok::Sym(s)));
                i += s.len();
            }
            None => {
                return Err(SyntaxError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Raw syntax tree

#[derive(Debug, Clone)]
enum Raw {
    Ident(usize, String),
    Num(BigInt),
    Lam(String, Option<Type>, Box<Raw>),
    Quant(Quantifier, String, Box<Raw>),
    App(Box<Raw>, Vec<Raw>),
    Bin(&'static str, Box<Raw>, Box<Raw>),
    Not(Box<Raw>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), SyntaxError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn ty(&mut self) -> Result<Type, SyntaxError> {
        let dom = if self.eat("(") {
            let t = self.ty()?;
            self.expect(")")?;
            t
        } else {
            match self.ident()?.as_str() {
                "Entity" => Type::Entity,
                "Num" => Type::Num,
                "Bool" => Type::Bool,
                other => return self.err(format!("unknown type `{other}`")),
            }
        };
        if self.eat("->") {
            Ok(Type::arrow(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn expr(&mut self) -> Result<Raw, SyntaxError> {
        let binder_follows = !matches!(self.peek_at(1), Some(Tok::Sym("(")));
        if self.is_keyword("lam") {
            self.pos += 1;
            let x = self.ident()?;
            let ty = if self.eat(":") { Some(self.ty()?) } else { None };
            self.expect(".")?;
            let body = self.expr()?;
            return Ok(Raw::Lam(x, ty, Box::new(body)));
        }
        if binder_follows && (self.is_keyword("forall") || self.is_keyword("exists")) {
            let q = if self.is_keyword("forall") {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            self.pos += 1;
            let x = self.ident()?;
            if self.eat(":") {
                let t = self.ty()?;
                if t != Type::Entity {
                    return self.err("quantifiers range over Entity only");
                }
            }
            self.expect(".")?;
            let body = self.expr()?;
            return Ok(Raw::Quant(q, x, Box::new(body)));
        }
        self.implies()
    }

    fn implies(&mut self) -> Result<Raw, SyntaxError> {
        let lhs = self.or()?;
        if self.eat("=>") {
            let rhs = self.implies()?;
            Ok(Raw::Bin(builtin::IMPLIES, Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Raw, SyntaxError> {
        let lhs = self.and()?;
        if self.eat("||") {
            let rhs = self.or()?;
            Ok(Raw::Bin(builtin::OR, Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn and(&mut self) -> Result<Raw, SyntaxError> {
        let lhs = self.not()?;
        if self.eat("&&") {
            let rhs = self.and()?;
            Ok(Raw::Bin(builtin::AND, Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn not(&mut self) -> Result<Raw, SyntaxError> {
        if self.eat("!") {
            Ok(Raw::Not(Box::new(self.not()?)))
        } else {
            self.cmp()
        }
    }

    fn cmp(&mut self) -> Result<Raw, SyntaxError> {
        let lhs = self.add()?;
        let op = match self.peek() {
            Some(Tok::Sym("=")) => builtin::EQ,
            Some(Tok::Sym("!=")) => "!=",
            Some(Tok::Sym("<")) => builtin::LT,
            Some(Tok::Sym("<=")) => builtin::LE,
            Some(Tok::Sym(">")) => builtin::GT,
            Some(Tok::Sym(">=")) => builtin::GE,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.add()?;
        if op == "!=" {
            Ok(Raw::Not(Box::new(Raw::Bin(
                builtin::EQ,
                Box::new(lhs),
                Box::new(rhs),
            ))))
        } else {
            Ok(Raw::Bin(op, Box::new(lhs), Box::new(rhs)))
        }
    }

    fn add(&mut self) -> Result<Raw, SyntaxError> {
        let mut lhs = self.mul()?;
        loop {
            let op = if self.eat("+") {
                builtin::PLUS
            } else if self.eat("-") {
                builtin::MINUS
            } else {
                return Ok(lhs);
            };
            let rhs = self.mul()?;
            lhs = Raw::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn mul(&mut self) -> Result<Raw, SyntaxError> {
        let mut lhs = self.postfix()?;
        while self.eat("*") {
            let rhs = self.postfix()?;
            lhs = Raw::Bin(builtin::TIMES, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Raw, SyntaxError> {
        let mut head = self.atom()?;
        while self.eat("(") {
            let mut args = vec![self.expr()?];
            while self.eat(",") {
                args.push(self.expr()?);
            }
            self.expect(")")?;
            head = Raw::App(Box::new(head), args);
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Raw, SyntaxError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                if s == "lam" || ((s == "forall" || s == "exists") && self.peek_at(1) != Some(&Tok::Sym("("))) {
                    return self.err("binder must be parenthesised here");
                }
                self.pos += 1;
                Ok(Raw::Ident(at, s))
            }
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Raw::Num(n))
            }
            Some(Tok::Sym("-")) if matches!(self.peek_at(1), Some(Tok::Num(_))) => {
                self.pos += 1;
                let Some(Tok::Num(n)) = self.peek().cloned() else {
                    unreachable!()
                };
                self.pos += 1;
                Ok(Raw::Num(-n))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(tok) => self.err(format!("unexpected token {tok:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

// ---------------------------------------------------------------------------
// Elaboration with type inference

#[derive(Debug, Clone, PartialEq)]
enum Ty {
    Meta(usize),
    Entity,
    Num,
    Bool,
    Arrow(Box<Ty>, Box<Ty>),
}

impl From<&Type> for Ty {
    fn from(t: &Type) -> Ty {
        match t {
            Type::Entity => Ty::Entity,
            Type::Num => Ty::Num,
            Type::Bool => Ty::Bool,
            Type::Arrow(d, c) => Ty::Arrow(Box::new(d.as_ref().into()), Box::new(c.as_ref().into())),
        }
    }
}

enum ETerm {
    Var(String, Ty),
    Const(String, Ty),
    Abs(String, Ty, Box<ETerm>),
    App(Box<ETerm>, Box<ETerm>),
}

struct Elab<'a> {
    sig: &'a Signature,
    placeholders: &'a HashMap<String, Type>,
    subst: Vec<Option<Ty>>,
    free: Vec<(String, Ty)>,
    allow_free: bool,
}

impl<'a> Elab<'a> {
    fn fresh(&mut self) -> Ty {
        self.subst.push(None);
        Ty::Meta(self.subst.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Meta(i) => match &self.subst[*i] {
                Some(u) => self.resolve(u),
                None => t.clone(),
            },
            Ty::Arrow(d, c) => Ty::Arrow(Box::new(self.resolve(d)), Box::new(self.resolve(c))),
            _ => t.clone(),
        }
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(j) => j == m,
            Ty::Arrow(d, c) => self.occurs(m, &d) || self.occurs(m, &c),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty, what: &dyn Fn() -> String) -> Result<(), TypeError> {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (&a, &b) {
            (Ty::Meta(i), Ty::Meta(j)) if i == j => Ok(()),
            (Ty::Meta(i), other) | (other, Ty::Meta(i)) => {
                if self.occurs(*i, other) {
                    return Err(TypeError::Mismatch(format!("infinite type in {}", what())));
                }
                self.subst[*i] = Some(other.clone());
                Ok(())
            }
            (Ty::Arrow(d1, c1), Ty::Arrow(d2, c2)) => {
                self.unify(d1, d2, what)?;
                self.unify(c1, c2, what)
            }
            _ if a == b => Ok(()),
            _ => Err(TypeError::Mismatch(format!(
                "{} ({} vs {})",
                what(),
                self.zonk_ty(&a),
                self.zonk_ty(&b)
            ))),
        }
    }

    fn zonk_ty(&self, t: &Ty) -> Type {
        match self.resolve(t) {
            Ty::Meta(_) | Ty::Entity => Type::Entity,
            Ty::Num => Type::Num,
            Ty::Bool => Type::Bool,
            Ty::Arrow(d, c) => Type::arrow(self.zonk_ty(&d), self.zonk_ty(&c)),
        }
    }

    fn zonk(&self, e: &ETerm) -> Term {
        match e {
            ETerm::Var(x, t) => Term::Var(x.clone(), self.zonk_ty(t)),
            ETerm::Const(c, t) => Term::Const(c.clone(), self.zonk_ty(t)),
            ETerm::Abs(x, t, b) => Term::abs(x.clone(), self.zonk_ty(t), self.zonk(b)),
            ETerm::App(f, a) => Term::app(self.zonk(f), self.zonk(a)),
        }
    }

    fn constant(&self, name: &str) -> Option<Ty> {
        self.sig.lookup(name).map(|t| (&t).into())
    }

    fn ident(
        &mut self,
        pos: usize,
        name: &str,
        env: &[(String, Ty)],
        head: bool,
    ) -> Result<(ETerm, Ty), SyntaxError> {
        if let Some((_, t)) = env.iter().rev().find(|(n, _)| n == name) {
            return Ok((ETerm::Var(name.to_string(), t.clone()), t.clone()));
        }
        if let Some(t) = self.placeholders.get(name) {
            let t: Ty = t.into();
            return Ok((ETerm::Var(name.to_string(), t.clone()), t));
        }
        if let Some(t) = self.constant(name) {
            return Ok((ETerm::Const(name.to_string(), t.clone()), t));
        }
        if name.starts_with('#') {
            return Err(SyntaxError::Parse {
                pos,
                msg: format!("unknown placeholder `{name}`"),
            });
        }
        if head || !self.allow_free {
            if head || is_program_var(name) {
                return Err(TypeError::UnknownConstant(name.to_string()).into());
            }
            return Err(SyntaxError::FreeVariable(name.to_string()));
        }
        if let Some((_, t)) = self.free.iter().find(|(n, _)| n == name) {
            return Ok((ETerm::Var(name.to_string(), t.clone()), t.clone()));
        }
        let t = self.fresh();
        self.free.push((name.to_string(), t.clone()));
        Ok((ETerm::Var(name.to_string(), t.clone()), t))
    }

    fn op_const(&self, op: &str) -> (ETerm, Ty) {
        let t: Ty = (&self.sig.lookup(op).expect("builtin operator")).into();
        (ETerm::Const(op.to_string(), t.clone()), t)
    }

    fn apply(
        &mut self,
        f: (ETerm, Ty),
        arg: (ETerm, Ty),
        what: &dyn Fn() -> String,
    ) -> Result<(ETerm, Ty), SyntaxError> {
        let res = self.fresh();
        let expected = Ty::Arrow(Box::new(arg.1.clone()), Box::new(res.clone()));
        self.unify(&f.1, &expected, what)?;
        Ok((ETerm::App(Box::new(f.0), Box::new(arg.0)), res))
    }

    fn elab(&mut self, raw: &Raw, env: &mut Vec<(String, Ty)>) -> Result<(ETerm, Ty), SyntaxError> {
        match raw {
            Raw::Ident(pos, name) => self.ident(*pos, name, env, false),
            Raw::Num(n) => Ok((ETerm::Const(n.to_string(), Ty::Num), Ty::Num)),
            Raw::Lam(x, ann, body) => {
                let t = match ann {
                    Some(t) => t.into(),
                    None => self.fresh(),
                };
                env.push((x.clone(), t.clone()));
                let b = self.elab(body, env);
                env.pop();
                let (b, bt) = b?;
                Ok((
                    ETerm::Abs(x.clone(), t.clone(), Box::new(b)),
                    Ty::Arrow(Box::new(t), Box::new(bt)),
                ))
            }
            Raw::Quant(q, x, body) => {
                env.push((x.clone(), Ty::Entity));
                let b = self.elab(body, env);
                env.pop();
                let (b, bt) = b?;
                self.unify(&bt, &Ty::Bool, &|| format!("body of {} {x}", q.name()))?;
                let lam = ETerm::Abs(x.clone(), Ty::Entity, Box::new(b));
                let qc = self.op_const(q.name());
                Ok((ETerm::App(Box::new(qc.0), Box::new(lam)), Ty::Bool))
            }
            Raw::App(head, args) => {
                let mut f = match head.as_ref() {
                    Raw::Ident(pos, name) => self.ident(*pos, name, env, true)?,
                    other => self.elab(other, env)?,
                };
                for a in args {
                    let arg = self.elab(a, env)?;
                    let descr = describe(head);
                    f = self.apply(f, arg, &|| format!("argument of `{descr}`"))?;
                }
                Ok(f)
            }
            Raw::Bin(op, a, b) => {
                let f = self.op_const(op);
                let a = self.elab(a, env)?;
                let b = self.elab(b, env)?;
                let f = self.apply(f, a, &|| format!("left operand of `{op}`"))?;
                self.apply(f, b, &|| format!("right operand of `{op}`"))
            }
            Raw::Not(a) => {
                let f = self.op_const(builtin::NOT);
                let a = self.elab(a, env)?;
                self.apply(f, a, &|| "operand of `!`".to_string())
            }
        }
    }
}

fn describe(raw: &Raw) -> String {
    match raw {
        Raw::Ident(_, n) => n.clone(),
        _ => "expression".to_string(),
    }
}

/// Options controlling how identifiers are resolved.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Names like `#1` with the types of the values that will be plugged in.
    pub placeholders: HashMap<String, Type>,
    /// Whether unbound first-order identifiers become free variables.
    pub allow_free: bool,
}

/// Parses a term, allowing free variables (their types are inferred).
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    parse_term_with(
        src,
        sig,
        &ParseOptions {
            allow_free: true,
            ..Default::default()
        },
    )
}

/// Parses a term that must be closed.
pub fn parse_closed_term(src: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    parse_term_with(src, sig, &ParseOptions::default())
}

pub fn parse_term_with(src: &str, sig: &Signature, opts: &ParseOptions) -> Result<Term, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: src.len(),
    };
    let raw = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    let mut el = Elab {
        sig,
        placeholders: &opts.placeholders,
        subst: Vec::new(),
        free: Vec::new(),
        allow_free: opts.allow_free,
    };
    let (e, _) = el.elab(&raw, &mut Vec::new())?;
    Ok(el.zonk(&e))
}

/// Parses a type such as `Entity -> Num`.
pub fn parse_type(src: &str) -> Result<Type, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: src.len(),
    };
    let t = p.ty()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after type");
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// Printer

const P_BINDER: u8 = 0;
const P_IMPLIES: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_NOT: u8 = 4;
const P_CMP: u8 = 5;
const P_ADD: u8 = 6;
const P_MUL: u8 = 7;
const P_ATOM: u8 = 8;

/// Prints a term in canonical syntax.
pub fn print(term: &Term) -> String {
    let mut out = String::new();
    pr(term, P_BINDER, &mut out);
    out
}

fn wrap(out: &mut String, need: bool, f: impl FnOnce(&mut String)) {
    if need {
        out.push('(');
    }
    f(out);
    if need {
        out.push(')');
    }
}

fn infix(op: &str) -> Option<(&'static str, u8, u8, u8)> {
    // (symbol, node precedence, left min, right min)
    Some(match op {
        builtin::IMPLIES => ("=>", P_IMPLIES, P_OR, P_IMPLIES),
        builtin::OR => ("||", P_OR, P_AND, P_OR),
        builtin::AND => ("&&", P_AND, P_NOT, P_AND),
        builtin::EQ => ("=", P_CMP, P_ADD, P_ADD),
        builtin::GT => (">", P_CMP, P_ADD, P_ADD),
        builtin::LT => ("<", P_CMP, P_ADD, P_ADD),
        builtin::GE => (">=", P_CMP, P_ADD, P_ADD),
        builtin::LE => ("<=", P_CMP, P_ADD, P_ADD),
        builtin::PLUS => ("+", P_ADD, P_ADD, P_MUL),
        builtin::MINUS => ("-", P_ADD, P_ADD, P_MUL),
        builtin::TIMES => ("*", P_MUL, P_MUL, P_ATOM),
        _ => return None,
    })
}

fn pr(term: &Term, min: u8, out: &mut String) {
    if let Some((q, x, _, body)) = term.as_quant() {
        wrap(out, min > P_BINDER, |out| {
            out.push_str(q.name());
            out.push(' ');
            out.push_str(x);
            out.push_str(". ");
            pr(body, P_BINDER, out);
        });
        return;
    }
    if let Some((op, a, b)) = term.as_binary() {
        if let Some((sym, prec, lmin, rmin)) = infix(op) {
            wrap(out, min > prec, |out| {
                pr(a, lmin, out);
                out.push(' ');
                out.push_str(sym);
                out.push(' ');
                pr(b, rmin, out);
            });
            return;
        }
    }
    if let Some(a) = term.as_not() {
        wrap(out, min > P_NOT, |out| {
            out.push('!');
            pr(a, P_ATOM, out);
        });
        return;
    }
    match term {
        Term::Var(x, _) => out.push_str(x),
        Term::Const(c, _) => {
            let negative = c.starts_with('-');
            wrap(out, negative && min > P_ATOM, |out| out.push_str(c));
        }
        Term::Abs(x, t, body) => wrap(out, min > P_BINDER, |out| {
            out.push_str("lam ");
            out.push_str(x);
            out.push_str(": ");
            out.push_str(&t.to_string());
            out.push_str(". ");
            pr(body, P_BINDER, out);
        }),
        Term::App(..) => {
            let (head, args) = term.spine();
            match head {
                Term::Var(n, _) | Term::Const(n, _) => out.push_str(n),
                other => wrap(out, true, |out| pr(other, P_BINDER, out)),
            }
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                pr(a, P_BINDER, out);
            }
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::ops::alpha_eq;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.declare("balance", Type::arrow(Type::Entity, Type::Num)).unwrap();
        s
    }

    #[test]
    fn parses_quantified_comparison() {
        let t = parse_term("forall x. balance(x) > 0", &sig()).unwrap();
        let x = Term::var("x", Type::Entity);
        let expected = Term::forall(
            "x",
            Term::gt(Term::call("balance", Type::Entity, Type::Num, x), Term::int(0)),
        );
        assert_eq!(t, expected);
        assert_eq!(print(&t), "forall x. balance(x) > 0");
    }

    #[test]
    fn infers_lambda_binder_types() {
        let t = parse_term("lam f. forall x. f(post(x)) = f(x) + 1", &sig()).unwrap();
        match &t {
            Term::Abs(_, ty, _) => assert_eq!(*ty, Type::arrow(Type::Entity, Type::Num)),
            _ => panic!("expected abstraction"),
        }
        assert_eq!(
            print(&t),
            "lam f: Entity -> Num. forall x. f(post(x)) = f(x) + 1"
        );
    }

    #[test]
    fn free_variables_and_unknown_heads() {
        let t = parse_term("balance(x) = _balance", &sig()).unwrap();
        assert_eq!(
            t,
            Term::eq(
                Term::call("balance", Type::Entity, Type::Num, Term::var("x", Type::Entity)),
                Term::pvar("_balance")
            )
        );
        assert!(matches!(
            parse_term("frob(x) > 0", &sig()),
            Err(SyntaxError::Type(TypeError::UnknownConstant(_)))
        ));
        assert!(matches!(
            parse_closed_term("balance(x) > 0", &sig()),
            Err(SyntaxError::FreeVariable(_))
        ));
    }

    #[test]
    fn connectives_and_negative_literals_round_trip() {
        let src = "_x = _y && _x > 1 || !(_y - -3 <= 2 * _x) => true";
        let t = parse_term(src, &sig()).unwrap();
        let again = parse_term(&print(&t), &sig()).unwrap();
        assert!(alpha_eq(&t, &again));
        let ne = parse_term("_a != _b", &sig()).unwrap();
        assert_eq!(ne, Term::not(Term::eq(Term::pvar("_a"), Term::pvar("_b"))));
        assert_eq!(print(&ne), "!(_a = _b)");
    }

    #[test]
    fn nested_conjunctions_print_without_parens() {
        let t = Term::conj([Term::tt(), Term::ff(), Term::tt()]);
        assert_eq!(print(&t), "true && false && true");
        let left = Term::and(Term::and(Term::tt(), Term::ff()), Term::tt());
        assert_eq!(print(&left), "(true && false) && true");
    }

    #[test]
    fn quantifier_inside_conjunction_is_parenthesised() {
        let t = parse_term("(forall x. balance(x) > 0) && (exists y. balance(y) = _b)", &sig()).unwrap();
        assert_eq!(
            print(&t),
            "(forall x. balance(x) > 0) && (exists y. balance(y) = _b)"
        );
    }

    #[test]
    fn reports_offsets() {
        match parse_term("balance(x) > ", &sig()) {
            Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 13),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_types() {
        assert_eq!(
            parse_type("(Entity -> Num) -> Bool").unwrap(),
            Type::arrow(Type::arrow(Type::Entity, Type::Num), Type::Bool)
        );
    }
}
