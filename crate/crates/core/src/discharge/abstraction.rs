use crate::lambda::{builtin, eval_int_literal_expr, type_of, Term, Type};

use super::skolem::Fresh;
use super::util::is_interpreted;

/// Which fresh symbol stands for which residual term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Abstraction {
    /// Integer variables for uninterpreted or nonlinear `Num` terms.
    pub ints: Vec<(Term, String)>,
    /// Propositional variables for uninterpreted `Bool` atoms.
    pub bools: Vec<(Term, String)>,
}

impl Abstraction {
    pub fn is_empty(&self) -> bool {
        self.ints.is_empty() && self.bools.is_empty()
    }
}

/// Replaces each distinct uninterpreted `Num` term and each nonlinear
/// product by a fresh integer constant, and each uninterpreted `Bool` atom by
/// a fresh propositional constant. Validity of the result implies validity
/// of the input.
pub fn abstract_uninterpreted(formula: &Term) -> (Term, Abstraction) {
    let mut st = State {
        ints: Fresh::new("v", formula),
        bools: Fresh::new("p", formula),
        map: Abstraction::default(),
    };
    let t = st.boolean(formula);
    (t, st.map)
}

struct State {
    ints: Fresh,
    bools: Fresh,
    map: Abstraction,
}

impl State {
    fn int_var(&mut self, t: &Term) -> Term {
        if let Some((_, v)) = self.map.ints.iter().find(|(s, _)| s == t) {
            return Term::constant(v.clone(), Type::Num);
        }
        let v = self.ints.name();
        self.map.ints.push((t.clone(), v.clone()));
        Term::constant(v, Type::Num)
    }

    fn bool_var(&mut self, t: &Term) -> Term {
        if let Some((_, v)) = self.map.bools.iter().find(|(s, _)| s == t) {
            return Term::constant(v.clone(), Type::Bool);
        }
        let v = self.bools.name();
        self.map.bools.push((t.clone(), v.clone()));
        Term::constant(v, Type::Bool)
    }

    fn boolean(&mut self, t: &Term) -> Term {
        if t.is_true() || t.is_false() {
            return t.clone();
        }
        if let Some(a) = t.as_not() {
            return Term::not(self.boolean(a));
        }
        if let Some((op, a, b)) = t.as_binary() {
            if builtin::CONNECTIVES.contains(&op) {
                return Term::binop(op, self.boolean(a), self.boolean(b));
            }
            if builtin::COMPARISONS.contains(&op) {
                return Term::binop(op, self.num(a), self.num(b));
            }
        }
        self.bool_var(t)
    }

    fn num(&mut self, t: &Term) -> Term {
        if t.as_int().is_some() || t.is_program_var() {
            return t.clone();
        }
        if let Some((op, a, b)) = t.as_binary() {
            match op {
                builtin::PLUS | builtin::MINUS => {
                    return Term::binop(op, self.num(a), self.num(b));
                }
                builtin::TIMES => {
                    let lit = |x: &Term| eval_int_literal_expr(x).is_some();
                    if lit(a) || lit(b) {
                        return Term::binop(op, self.num(a), self.num(b));
                    }
                    return self.int_var(t);
                }
                _ => {}
            }
        }
        debug_assert!(
            matches!(t.spine().0, Term::Const(c, _) if !is_interpreted(c))
                && type_of(t).ok() == Some(Type::Num),
            "unexpected numeric term {t}"
        );
        self.int_var(t)
    }
}
