use std::fmt;

use crate::lambda::{
    builtin, parse_term, substitute, type_of, Signature, SyntaxError, Term, Type,
};

/// One line of a relation: `body = _var`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binding {
    pub body: Term,
    pub program_var: String,
}

/// The relation between logical-form functions and program variables,
/// read as `exists xs. body_1 = _v_1 && ... && body_n = _v_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LfplRelation {
    /// Entity variables in first-occurrence order.
    pub logical_vars: Vec<String>,
    pub bindings: Vec<Binding>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RelationError {
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: SyntaxError },
    #[error("line {line}: expected `term = _var`")]
    Shape { line: usize },
    #[error("line {line}: binding body must have type Num, found {ty}")]
    BodyType { line: usize, ty: Type },
    #[error("line {line}: logical variable `{var}` must range over entities")]
    VarType { line: usize, var: String },
    #[error("line {line}: program variable `{var}` is bound twice")]
    Duplicate { line: usize, var: String },
}

impl LfplRelation {
    pub fn new(bindings: Vec<Binding>) -> Self {
        let mut logical_vars = Vec::new();
        for b in &bindings {
            collect_vars(&b.body, &mut Vec::new(), &mut logical_vars);
        }
        LfplRelation {
            logical_vars,
            bindings,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn program_vars(&self) -> impl Iterator<Item = &str> {
        self.bindings.iter().map(|b| b.program_var.as_str())
    }

    /// Canonical file text, one binding per line.
    pub fn to_text(&self) -> String {
        self.bindings
            .iter()
            .map(|b| format!("{} = {}\n", b.body, b.program_var))
            .collect()
    }
}

impl fmt::Display for LfplRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", relation_formula(self))
    }
}

fn collect_vars(t: &Term, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match t {
        Term::Var(x, _) => {
            if !bound.contains(x) && !out.contains(x) {
                out.push(x.clone());
            }
        }
        Term::Const(..) => {}
        Term::Abs(x, _, b) => {
            bound.push(x.clone());
            collect_vars(b, bound, out);
            bound.pop();
        }
        Term::App(f, a) => {
            collect_vars(f, bound, out);
            collect_vars(a, bound, out);
        }
    }
}

/// Reads a relation file: `term = _programvar` per line, `#` comments.
pub fn load_relation(text: &str, sig: &Signature) -> Result<LfplRelation, RelationError> {
    let mut bindings: Vec<Binding> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let src = raw.split('#').next().unwrap_or("").trim();
        if src.is_empty() {
            continue;
        }
        let t = parse_term(src, sig).map_err(|source| RelationError::Syntax { line, source })?;
        let Some((op, body, rhs)) = t.as_binary() else {
            return Err(RelationError::Shape { line });
        };
        let Term::Const(var, _) = rhs else {
            return Err(RelationError::Shape { line });
        };
        if op != builtin::EQ || !rhs.is_program_var() {
            return Err(RelationError::Shape { line });
        }
        let ty = type_of(body).map_err(|e| RelationError::Syntax {
            line,
            source: SyntaxError::Type(e),
        })?;
        if ty != Type::Num {
            return Err(RelationError::BodyType { line, ty });
        }
        for (x, xty) in crate::lambda::free_vars(body) {
            if xty != Type::Entity {
                return Err(RelationError::VarType { line, var: x });
            }
        }
        if bindings.iter().any(|b| &b.program_var == var) {
            return Err(RelationError::Duplicate {
                line,
                var: var.clone(),
            });
        }
        bindings.push(Binding {
            body: body.clone(),
            program_var: var.clone(),
        });
    }
    Ok(LfplRelation::new(bindings))
}

/// Replaces every logical variable `x` by `post(x)` in each binding body.
pub fn prime(r: &LfplRelation) -> LfplRelation {
    let bindings = r
        .bindings
        .iter()
        .map(|b| {
            let mut body = b.body.clone();
            // post(x) mentions only x, so sequential substitution is
            // simultaneous here.
            for x in &r.logical_vars {
                let px = Term::post(Term::var(x.clone(), Type::Entity));
                body = substitute(&body, x, &px).expect("entity for entity");
            }
            Binding {
                body,
                program_var: b.program_var.clone(),
            }
        })
        .collect();
    LfplRelation {
        logical_vars: r.logical_vars.clone(),
        bindings,
    }
}

/// `exists xs. /\ body_i = _v_i`, or `true` when there are no bindings.
pub fn relation_formula(r: &LfplRelation) -> Term {
    if r.bindings.is_empty() {
        return Term::tt();
    }
    let body = Term::conj(
        r.bindings
            .iter()
            .map(|b| Term::eq(b.body.clone(), Term::pvar(b.program_var.clone()))),
    );
    r.logical_vars
        .iter()
        .rev()
        .fold(body, |acc, x| Term::exists(x.clone(), acc))
}
