use crate::lambda::{builtin, Term};

use super::ast::{BinOp, PExpr};

/// Translates a program expression into a logic term. Program variables
/// become `Num` constants under their own names.
pub fn embed(e: &PExpr) -> Term {
    match e {
        PExpr::Var(v) => Term::pvar(v.clone()),
        PExpr::Int(n) => Term::int(n.clone()),
        PExpr::Bool(b) => Term::bool_lit(*b),
        PExpr::Neg(a) => match a.as_ref() {
            PExpr::Int(n) => Term::int(-n.clone()),
            other => Term::minus(Term::int(0), embed(other)),
        },
        PExpr::Not(a) => Term::not(embed(a)),
        PExpr::Bin(op, a, b) => {
            let (a, b) = (embed(a), embed(b));
            match op {
                BinOp::Ne => Term::not(Term::eq(a, b)),
                _ => Term::binop(logic_op(*op), a, b),
            }
        }
    }
}

fn logic_op(op: BinOp) -> &'static str {
    match op {
        BinOp::Add => builtin::PLUS,
        BinOp::Sub => builtin::MINUS,
        BinOp::Mul => builtin::TIMES,
        BinOp::Eq | BinOp::Ne => builtin::EQ,
        BinOp::Lt => builtin::LT,
        BinOp::Le => builtin::LE,
        BinOp::Gt => builtin::GT,
        BinOp::Ge => builtin::GE,
        BinOp::And => builtin::AND,
        BinOp::Or => builtin::OR,
    }
}
