//! Simply-typed lambda calculus with logical and arithmetic constants.
//!
//! Every formula in the system (logical forms, relations, verification
//! conditions) is a [`Term`].

mod eval;
mod ops;
mod syntax;
mod term;
mod types;

pub use eval::{EvalError, FnTable, Structure, Value};
pub use ops::{
    alpha_eq, canonical_key, eval_int_literal_expr, fold_constants, free_vars, is_closed,
    normalize, rename_bound_apart, replace_consts, substitute, type_of, typecheck, LambdaError,
    TypeError, NORMALIZE_BUDGET,
};
pub use syntax::{
    parse_closed_term, parse_term, parse_term_with, parse_type, print, ParseOptions, SyntaxError,
};
pub use term::{Quantifier, Term};
pub use types::{builtin, is_numeral, is_program_var, Signature, SignatureError, Type};
