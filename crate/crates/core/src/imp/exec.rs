use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::ast::{BinOp, PExpr, Stmt};

/// Program state: variable name to unbounded integer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PState(pub BTreeMap<String, BigInt>);

impl PState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, value: impl Into<BigInt>) -> Self {
        self.0.insert(var.to_string(), value.into());
        self
    }

    pub fn get(&self, var: &str) -> Option<&BigInt> {
        self.0.get(var)
    }

    pub fn set(&mut self, var: &str, value: BigInt) {
        self.0.insert(var.to_string(), value);
    }
}

impl<S: Into<String>, V: Into<BigInt>> FromIterator<(S, V)> for PState {
    fn from_iter<I: IntoIterator<Item = (S, V)>>(iter: I) -> Self {
        PState(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

impl fmt::Display for PState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("unbound program variable `{0}`")]
    UnboundVariable(String),
    #[error("sort error at runtime: `{0}`")]
    Sort(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PValue {
    Int(BigInt),
    Bool(bool),
}

/// Evaluates a program expression.
pub fn eval_pexpr(e: &PExpr, st: &PState) -> Result<PValue, ExecError> {
    Ok(match e {
        PExpr::Var(v) => PValue::Int(
            st.get(v)
                .cloned()
                .ok_or_else(|| ExecError::UnboundVariable(v.clone()))?,
        ),
        PExpr::Int(n) => PValue::Int(n.clone()),
        PExpr::Bool(b) => PValue::Bool(*b),
        PExpr::Neg(a) => PValue::Int(-eval_int(a, st)?),
        PExpr::Not(a) => PValue::Bool(!eval_bool(a, st)?),
        PExpr::Bin(op, a, b) => match op {
            BinOp::And => PValue::Bool(eval_bool(a, st)? && eval_bool(b, st)?),
            BinOp::Or => PValue::Bool(eval_bool(a, st)? || eval_bool(b, st)?),
            _ => {
                let x = eval_int(a, st)?;
                let y = eval_int(b, st)?;
                match op {
                    BinOp::Add => PValue::Int(x + y),
                    BinOp::Sub => PValue::Int(x - y),
                    BinOp::Mul => PValue::Int(x * y),
                    BinOp::Eq => PValue::Bool(x == y),
                    BinOp::Ne => PValue::Bool(x != y),
                    BinOp::Lt => PValue::Bool(x < y),
                    BinOp::Le => PValue::Bool(x <= y),
                    BinOp::Gt => PValue::Bool(x > y),
                    BinOp::Ge => PValue::Bool(x >= y),
                    BinOp::And | BinOp::Or => unreachable!(),
                }
            }
        },
    })
}

pub fn eval_int(e: &PExpr, st: &PState) -> Result<BigInt, ExecError> {
    match eval_pexpr(e, st)? {
        PValue::Int(n) => Ok(n),
        PValue::Bool(_) => Err(ExecError::Sort(e.to_string())),
    }
}

pub fn eval_bool(e: &PExpr, st: &PState) -> Result<bool, ExecError> {
    match eval_pexpr(e, st)? {
        PValue::Bool(b) => Ok(b),
        PValue::Int(_) => Err(ExecError::Sort(e.to_string())),
    }
}

/// Big-step execution. Every loop iteration burns one unit of fuel.
pub fn exec(stmt: &Stmt, state: PState, fuel: u64) -> Result<PState, ExecError> {
    let mut fuel = fuel;
    let mut st = state;
    run(stmt, &mut st, &mut fuel)?;
    Ok(st)
}

fn run(stmt: &Stmt, st: &mut PState, fuel: &mut u64) -> Result<(), ExecError> {
    match stmt {
        Stmt::Skip => Ok(()),
        Stmt::Assign(v, e) => {
            let val = eval_int(e, st)?;
            st.set(v, val);
            Ok(())
        }
        Stmt::Seq(a, b) => {
            run(a, st, fuel)?;
            run(b, st, fuel)
        }
        Stmt::If(c, a, b) => {
            if eval_bool(c, st)? {
                run(a, st, fuel)
            } else {
                run(b, st, fuel)
            }
        }
        Stmt::While { cond, body, .. } => {
            while eval_bool(cond, st)? {
                if *fuel == 0 {
                    return Err(ExecError::FuelExhausted);
                }
                *fuel -= 1;
                run(body, st, fuel)?;
            }
            Ok(())
        }
    }
}
