//! The While language: AST, concrete parser, reference interpreter, and the
//! embedding of program expressions into logic terms.

mod ast;
mod embed;
mod exec;
mod parse;

pub use ast::{BinOp, PExpr, Sort, Stmt};
pub use embed::embed;
pub use exec::{eval_bool, eval_int, eval_pexpr, exec, ExecError, PState, PValue};
pub use parse::{parse_pexpr, parse_program};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImpError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("{line}:{col}: while loop has no invariant annotation")]
    MissingInvariant { line: usize, col: usize },
}
