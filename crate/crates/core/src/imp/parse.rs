use num_bigint::BigInt;

use super::ast::{BinOp, PExpr, Stmt};
use super::ImpError;
use crate::lambda::is_program_var;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
}

#[derive(Debug, Clone, Copy)]
struct Loc {
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 16] = [
    ":=", "==", "!=", "<=", ">=", "&&", "||", ";", "(", ")", "+", "-", "*", "=", "<", ">",
];

const KEYWORDS: [&str; 14] = [
    "skip", "if", "then", "else", "fi", "while", "invariant", "do", "od", "true", "false", "and",
    "or", "not",
];

fn lex(src: &str) -> Result<Vec<(Loc, Tok)>, ImpError> {
    let mut out = Vec::new();
    for (lineno, line) in src.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("");
        let chars: Vec<char> = code.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let loc = Loc {
                line: lineno + 1,
                col: i + 1,
            };
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((loc, Tok::Int(s.parse().expect("digits"))));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((loc, Tok::Ident(chars[start..i].iter().collect())));
            } else if c == '!' && chars.get(i + 1) != Some(&'=') {
                out.push((loc, Tok::Sym("!")));
                i += 1;
            } else {
                let rest: String = chars[i..].iter().collect();
                match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                    Some(s) => {
                        out.push((loc, Tok::Sym(s)));
                        i += s.len();
                    }
                    None => {
                        return Err(ImpError::Syntax {
                            line: loc.line,
                            col: loc.col,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Loc, Tok)>,
    pos: usize,
    end: Loc,
}

impl Parser {
    fn loc(&self) -> Loc {
        self.toks.get(self.pos).map(|(l, _)| *l).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ImpError> {
        let l = self.loc();
        Err(ImpError::Syntax {
            line: l.line,
            col: l.col,
            msg: msg.into(),
        })
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ImpError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_block_end(&self) -> bool {
        self.peek().is_none() || ["od", "fi", "else"].iter().any(|k| self.is_kw(k))
    }

    fn seq(&mut self) -> Result<Stmt, ImpError> {
        let mut stmts = vec![self.stmt()?];
        while self.eat(";") {
            if self.at_block_end() {
                break;
            }
            stmts.push(self.stmt()?);
        }
        Ok(Stmt::block(stmts))
    }

    fn stmt(&mut self) -> Result<Stmt, ImpError> {
        if self.eat_kw("skip") {
            return Ok(Stmt::Skip);
        }
        if self.eat_kw("if") {
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.seq()?;
            let e = if self.eat_kw("else") {
                self.seq()?
            } else {
                Stmt::Skip
            };
            // `fi` may be omitted when the conditional closes its block.
            if !self.eat_kw("fi") && !self.at_block_end() && self.peek() != Some(&Tok::Sym(";")) {
                return self.err("expected `fi`");
            }
            return Ok(Stmt::if_(c, t, e));
        }
        if self.is_kw("while") {
            let at = self.loc();
            self.pos += 1;
            let cond = self.expr()?;
            let invariant = if self.eat_kw("invariant") {
                Some(self.expr()?)
            } else {
                None
            };
            if !self.is_kw("do") {
                return self.err("expected `do`");
            }
            let Some(invariant) = invariant else {
                return Err(ImpError::MissingInvariant {
                    line: at.line,
                    col: at.col,
                });
            };
            self.pos += 1;
            let body = self.seq()?;
            self.expect_kw("od")?;
            return Ok(Stmt::while_(cond, invariant, body));
        }
        match self.peek().cloned() {
            Some(Tok::Ident(v)) if !KEYWORDS.contains(&v.as_str()) => {
                if !is_program_var(&v) {
                    return self.err(format!(
                        "program variable `{v}` must start with an underscore"
                    ));
                }
                self.pos += 1;
                if !self.eat(":=") {
                    return self.err("expected `:=`");
                }
                Ok(Stmt::assign(v, self.expr()?))
            }
            _ => self.err("expected a statement"),
        }
    }

    fn expr(&mut self) -> Result<PExpr, ImpError> {
        self.or()
    }

    fn or(&mut self) -> Result<PExpr, ImpError> {
        let mut lhs = self.and()?;
        while self.eat("||") || self.eat_kw("or") {
            lhs = PExpr::bin(BinOp::Or, lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<PExpr, ImpError> {
        let mut lhs = self.not()?;
        while self.eat("&&") || self.eat_kw("and") {
            lhs = PExpr::bin(BinOp::And, lhs, self.not()?);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<PExpr, ImpError> {
        if self.eat("!") || self.eat_kw("not") {
            Ok(PExpr::not(self.not()?))
        } else {
            self.cmp()
        }
    }

    fn cmp(&mut self) -> Result<PExpr, ImpError> {
        let lhs = self.add()?;
        let op = match self.peek() {
            Some(Tok::Sym("=")) | Some(Tok::Sym("==")) => BinOp::Eq,
            Some(Tok::Sym("!=")) => BinOp::Ne,
            Some(Tok::Sym("<")) => BinOp::Lt,
            Some(Tok::Sym("<=")) => BinOp::Le,
            Some(Tok::Sym(">")) => BinOp::Gt,
            Some(Tok::Sym(">=")) => BinOp::Ge,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        Ok(PExpr::bin(op, lhs, self.add()?))
    }

    fn add(&mut self) -> Result<PExpr, ImpError> {
        let mut lhs = self.mul()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = PExpr::bin(op, lhs, self.mul()?);
        }
    }

    fn mul(&mut self) -> Result<PExpr, ImpError> {
        let mut lhs = self.unary()?;
        while self.eat("*") {
            lhs = PExpr::bin(BinOp::Mul, lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PExpr, ImpError> {
        if self.eat("-") {
            return Ok(match self.unary()? {
                PExpr::Int(n) => PExpr::Int(-n),
                other => PExpr::Neg(Box::new(other)),
            });
        }
        if self.eat("!") {
            return Ok(PExpr::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<PExpr, ImpError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(PExpr::Int(n))
            }
            Some(Tok::Ident(s)) if s == "true" || s == "false" => {
                self.pos += 1;
                Ok(PExpr::Bool(s == "true"))
            }
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                if !is_program_var(&s) {
                    return self.err(format!(
                        "program variable `{s}` must start with an underscore"
                    ));
                }
                self.pos += 1;
                Ok(PExpr::Var(s))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(")") {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parser(text: &str) -> Result<Parser, ImpError> {
    let toks = lex(text)?;
    let lines = text.lines().count().max(1);
    let last_len = text.lines().last().map(|l| l.len()).unwrap_or(0);
    Ok(Parser {
        toks,
        pos: 0,
        end: Loc {
            line: lines,
            col: last_len + 1,
        },
    })
}

/// Parses and sort-checks a program.
pub fn parse_program(text: &str) -> Result<Stmt, ImpError> {
    let mut p = parser(text)?;
    if p.peek().is_none() {
        return p.err("empty program");
    }
    let s = p.seq()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    s.check().map_err(ImpError::Type)?;
    Ok(s)
}

/// Parses a standalone program expression (assertion or condition).
pub fn parse_pexpr(text: &str) -> Result<PExpr, ImpError> {
    let mut p = parser(text)?;
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    e.sort().map_err(ImpError::Type)?;
    Ok(e)
}
