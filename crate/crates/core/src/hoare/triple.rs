use std::collections::BTreeSet;
use std::fmt;

use crate::imp::Stmt;
use crate::lambda::{builtin, Signature, Term, Type};
use crate::semparse::SpecForm;

use super::relation::{prime, relation_formula, LfplRelation};
use super::HoareError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoareTriple {
    pub pre: Term,
    pub program: Stmt,
    pub post: Term,
}

impl fmt::Display for HoareTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{{{}}}", self.pre)?;
        writeln!(f, "{}", self.program)?;
        write!(f, "{{{}}}", self.post)
    }
}

fn fresh_witness(x: &str, taken: &mut BTreeSet<String>) -> String {
    let mut name = format!("w_{x}");
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

fn consts_of(t: &Term, out: &mut BTreeSet<String>) {
    t.for_each_const(&mut |n, _| {
        out.insert(n.to_string());
    });
}

/// Instantiates the leading universal quantifiers of `t` at every witness.
fn instantiate_leading(t: &Term, witnesses: &[Term], out: &mut Vec<Term>) {
    match t.as_quant() {
        Some((crate::lambda::Quantifier::Forall, x, _, body)) => {
            for w in witnesses {
                let inst = crate::lambda::substitute(body, x, w).expect("entity witness");
                instantiate_leading(&inst, witnesses, out);
            }
        }
        _ => out.push(t.clone()),
    }
}

/// Extracts the program-variable assertion `I` implied by `L` and `R`.
///
/// One fresh witness per logical variable; leading universals of each
/// conjunct of `L` are instantiated at every witness; binding bodies at the
/// witnesses are rewritten to their program variables; conjuncts that still
/// mention a witness are dropped. Anything kept must speak only about
/// program variables and literals.
pub fn project_invariant(l: &Term, r: &LfplRelation) -> Result<Term, HoareError> {
    let mut taken = BTreeSet::new();
    consts_of(l, &mut taken);
    for b in &r.bindings {
        consts_of(&b.body, &mut taken);
    }
    let witnesses: Vec<(String, Term)> = r
        .logical_vars
        .iter()
        .map(|x| {
            let w = fresh_witness(x, &mut taken);
            (x.clone(), Term::constant(w, Type::Entity))
        })
        .collect();
    let wterms: Vec<Term> = witnesses.iter().map(|(_, w)| w.clone()).collect();

    let mut ground_bindings = Vec::new();
    for b in &r.bindings {
        let mut body = b.body.clone();
        for (x, w) in &witnesses {
            body = crate::lambda::substitute(&body, x, w).expect("entity witness");
        }
        ground_bindings.push((body, Term::pvar(b.program_var.clone())));
    }

    let mut instances = Vec::new();
    for c in l.conjuncts() {
        instantiate_leading(c, &wterms, &mut instances);
    }

    let mut kept: Vec<Term> = Vec::new();
    for mut inst in instances {
        for (body, pv) in &ground_bindings {
            inst = inst.replace(body, pv);
        }
        if wterms.iter().any(|w| inst.contains(w)) {
            continue;
        }
        if !kept.contains(&inst) {
            kept.push(inst);
        }
    }
    if kept.is_empty() {
        return Err(HoareError::VacuousProjection);
    }
    let i = Term::conj(kept);
    let mut residual = BTreeSet::new();
    i.for_each_const(&mut |n, _| {
        if !Signature::is_builtin(n) && !crate::lambda::is_program_var(n) && !crate::lambda::is_numeral(n) {
            residual.insert(n.to_string());
        }
    });
    if residual.is_empty() {
        Ok(i)
    } else {
        Err(HoareError::ResidualSymbols(residual.into_iter().collect()))
    }
}

/// Assembles the triple for a parsed specification.
pub fn build_triple(
    spec: &SpecForm,
    r: &LfplRelation,
    program: &Stmt,
) -> Result<HoareTriple, HoareError> {
    let rel = relation_formula(r);
    let rel_post = relation_formula(&prime(r));
    let (pre, post) = match spec {
        SpecForm::Invariant(l) => {
            let i = project_invariant(l, r)?;
            (i.clone(), i)
        }
        SpecForm::Imperative(l) => (
            Term::and(l.clone(), rel),
            Term::and(l.clone(), rel_post),
        ),
        SpecForm::ConditionalImperative { cond, lf } => {
            if cond.mentions_const(builtin::POST) {
                return Err(HoareError::PostInCondition);
            }
            (
                Term::and(Term::and(lf.clone(), rel), cond.clone()),
                Term::and(lf.clone(), rel_post),
            )
        }
        SpecForm::PrePost { pre, post } => (
            Term::and(pre.clone(), rel),
            Term::and(post.clone(), rel_post),
        ),
    };
    Ok(HoareTriple {
        pre,
        program: program.clone(),
        post,
    })
}
