use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul => 6,
        }
    }

    /// (operand sort, result sort)
    pub fn sorts(self) -> (Sort, Sort) {
        match self {
            BinOp::Add | BinOp::Sub | BinOp::Mul => (Sort::Int, Sort::Int),
            BinOp::And | BinOp::Or => (Sort::Bool, Sort::Bool),
            _ => (Sort::Int, Sort::Bool),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Int,
    Bool,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Int => write!(f, "int"),
            Sort::Bool => write!(f, "bool"),
        }
    }
}

/// Program expressions over integer program variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PExpr {
    Var(String),
    Int(BigInt),
    Bool(bool),
    Neg(Box<PExpr>),
    Not(Box<PExpr>),
    Bin(BinOp, Box<PExpr>, Box<PExpr>),
}

impl PExpr {
    pub fn var(name: impl Into<String>) -> PExpr {
        PExpr::Var(name.into())
    }

    pub fn int(v: impl Into<BigInt>) -> PExpr {
        PExpr::Int(v.into())
    }

    pub fn bin(op: BinOp, a: PExpr, b: PExpr) -> PExpr {
        PExpr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn not(a: PExpr) -> PExpr {
        PExpr::Not(Box::new(a))
    }

    /// Two-sort check.
    pub fn sort(&self) -> Result<Sort, String> {
        match self {
            PExpr::Var(_) | PExpr::Int(_) => Ok(Sort::Int),
            PExpr::Bool(_) => Ok(Sort::Bool),
            PExpr::Neg(a) => expect(a, Sort::Int, "-").map(|_| Sort::Int),
            PExpr::Not(a) => expect(a, Sort::Bool, "!").map(|_| Sort::Bool),
            PExpr::Bin(op, a, b) => {
                let (arg, res) = op.sorts();
                expect(a, arg, op.symbol())?;
                expect(b, arg, op.symbol())?;
                Ok(res)
            }
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            PExpr::Var(v) => {
                out.insert(v.clone());
            }
            PExpr::Int(_) | PExpr::Bool(_) => {}
            PExpr::Neg(a) | PExpr::Not(a) => a.collect_vars(out),
            PExpr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        match self {
            PExpr::Var(v) => write!(f, "{v}"),
            PExpr::Int(n) => {
                if n.sign() == num_bigint::Sign::Minus && min > 0 {
                    write!(f, "({n})")
                } else {
                    write!(f, "{n}")
                }
            }
            PExpr::Bool(b) => write!(f, "{b}"),
            PExpr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 7)
            }
            PExpr::Not(a) => {
                write!(f, "!")?;
                a.fmt_prec(f, 7)
            }
            PExpr::Bin(op, a, b) => {
                let p = op.prec();
                let paren = p < min;
                if paren {
                    write!(f, "(")?;
                }
                // Comparisons are non-associative; arithmetic and boolean
                // operators associate to the left.
                let lmin = if p == 4 { p + 1 } else { p };
                a.fmt_prec(f, lmin)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_prec(f, p + 1)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

fn expect(e: &PExpr, want: Sort, op: &str) -> Result<(), String> {
    let got = e.sort()?;
    if got == want {
        Ok(())
    } else {
        Err(format!("operand `{e}` of `{op}` has sort {got}, expected {want}"))
    }
}

impl fmt::Display for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// While-language statements. Every loop carries its invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Stmt {
    Skip,
    Assign(String, PExpr),
    Seq(Box<Stmt>, Box<Stmt>),
    If(PExpr, Box<Stmt>, Box<Stmt>),
    While {
        cond: PExpr,
        invariant: PExpr,
        body: Box<Stmt>,
    },
}

impl Stmt {
    pub fn assign(var: impl Into<String>, e: PExpr) -> Stmt {
        Stmt::Assign(var.into(), e)
    }

    pub fn seq(a: Stmt, b: Stmt) -> Stmt {
        Stmt::Seq(Box::new(a), Box::new(b))
    }

    /// Right-nested sequence; `skip` when empty.
    pub fn block<I: IntoIterator<Item = Stmt>>(stmts: I) -> Stmt {
        let mut items: Vec<Stmt> = stmts.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Stmt::Skip;
        };
        while let Some(s) = items.pop() {
            acc = Stmt::seq(s, acc);
        }
        acc
    }

    pub fn if_(c: PExpr, t: Stmt, e: Stmt) -> Stmt {
        Stmt::If(c, Box::new(t), Box::new(e))
    }

    pub fn while_(cond: PExpr, invariant: PExpr, body: Stmt) -> Stmt {
        Stmt::While {
            cond,
            invariant,
            body: Box::new(body),
        }
    }

    /// Every program variable mentioned, including inside invariants.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Stmt::Skip => {}
            Stmt::Assign(v, e) => {
                out.insert(v.clone());
                e.collect_vars(out);
            }
            Stmt::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Stmt::If(c, a, b) => {
                c.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Stmt::While {
                cond,
                invariant,
                body,
            } => {
                cond.collect_vars(out);
                invariant.collect_vars(out);
                body.collect_vars(out);
            }
        }
    }

    /// Number of `while` loops.
    pub fn loop_count(&self) -> usize {
        match self {
            Stmt::Skip | Stmt::Assign(..) => 0,
            Stmt::Seq(a, b) | Stmt::If(_, a, b) => a.loop_count() + b.loop_count(),
            Stmt::While { body, .. } => 1 + body.loop_count(),
        }
    }

    pub fn is_loop_free(&self) -> bool {
        self.loop_count() == 0
    }

    /// Sort-checks every expression: conditions and invariants must be
    /// boolean, assigned expressions integer.
    pub fn check(&self) -> Result<(), String> {
        match self {
            Stmt::Skip => Ok(()),
            Stmt::Assign(v, e) => match e.sort()? {
                Sort::Int => Ok(()),
                Sort::Bool => Err(format!("cannot assign boolean `{e}` to `{v}`")),
            },
            Stmt::Seq(a, b) => {
                a.check()?;
                b.check()
            }
            Stmt::If(c, a, b) => {
                want_bool(c, "if condition")?;
                a.check()?;
                b.check()
            }
            Stmt::While {
                cond,
                invariant,
                body,
            } => {
                want_bool(cond, "loop condition")?;
                want_bool(invariant, "loop invariant")?;
                body.check()
            }
        }
    }

    fn fmt_indent(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match self {
            Stmt::Skip => write!(f, "{pad}skip"),
            Stmt::Assign(v, e) => write!(f, "{pad}{v} := {e}"),
            Stmt::Seq(a, b) => {
                a.fmt_indent(f, indent)?;
                writeln!(f, ";")?;
                b.fmt_indent(f, indent)
            }
            Stmt::If(c, a, b) => {
                writeln!(f, "{pad}if {c} then")?;
                a.fmt_indent(f, indent + 1)?;
                writeln!(f)?;
                writeln!(f, "{pad}else")?;
                b.fmt_indent(f, indent + 1)?;
                writeln!(f)?;
                write!(f, "{pad}fi")
            }
            Stmt::While {
                cond,
                invariant,
                body,
            } => {
                writeln!(f, "{pad}while {cond} invariant {invariant} do")?;
                body.fmt_indent(f, indent + 1)?;
                writeln!(f)?;
                write!(f, "{pad}od")
            }
        }
    }
}

fn want_bool(e: &PExpr, what: &str) -> Result<(), String> {
    match e.sort()? {
        Sort::Bool => Ok(()),
        Sort::Int => Err(format!("{what} `{e}` is not boolean")),
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indent(f, 0)
    }
}
