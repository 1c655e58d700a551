use std::collections::BTreeSet;

use crate::lambda::{builtin, substitute, Quantifier, Term, Type};

use super::util::ground_entity_terms;
use super::DischargeError;

/// Fresh constant names from a per-call counter.
pub(crate) struct Fresh {
    prefix: &'static str,
    next: usize,
    taken: BTreeSet<String>,
}

impl Fresh {
    pub(crate) fn new(prefix: &'static str, formula: &Term) -> Fresh {
        let mut taken = BTreeSet::new();
        formula.for_each_const(&mut |n, _| {
            taken.insert(n.to_string());
        });
        Fresh {
            prefix,
            next: 1,
            taken,
        }
    }

    pub(crate) fn name(&mut self) -> String {
        loop {
            let n = format!("{}{}", self.prefix, self.next);
            self.next += 1;
            if self.taken.insert(n.clone()) {
                return n;
            }
        }
    }
}

pub(crate) struct Skolemized {
    pub term: Term,
    /// The entity terms weak quantifiers were expanded over.
    pub grounds: Vec<Term>,
}

/// Removes every quantifier. Strong quantifiers (positive `forall`,
/// negative `exists`) become fresh entity constants; weak ones are expanded
/// into finite conjunctions or disjunctions over the ground entity terms:
/// the Skolem constants, the entity constants already present, and their
/// `post` images when the formula speaks about after-states.
pub fn skolemize_and_instantiate(formula: &Term) -> Result<Term, DischargeError> {
    skolemize(formula).map(|s| s.term)
}

pub(crate) fn skolemize(formula: &Term) -> Result<Skolemized, DischargeError> {
    let mut fresh = Fresh::new("c", formula);
    let mut skolems = Vec::new();
    let t = strong(formula, true, false, &mut fresh, &mut skolems)?;

    let mut grounds: Vec<Term> = skolems;
    for g in ground_entity_terms(&t) {
        if !grounds.contains(&g) {
            grounds.push(g);
        }
    }
    if grounds.is_empty() && has_quantifier(&t) {
        grounds.push(Term::constant(fresh.name(), Type::Entity));
    }
    if t.mentions_const(builtin::POST) {
        let base: Vec<Term> = grounds
            .iter()
            .filter(|g| matches!(g, Term::Const(..)))
            .cloned()
            .collect();
        for b in base {
            let p = Term::post(b);
            if !grounds.contains(&p) {
                grounds.push(p);
            }
        }
    }
    let term = expand(&t, &grounds);
    Ok(Skolemized { term, grounds })
}

fn has_quantifier(t: &Term) -> bool {
    t.mentions_const(builtin::FORALL) || t.mentions_const(builtin::EXISTS)
}

fn strong(
    t: &Term,
    pos: bool,
    under_weak: bool,
    fresh: &mut Fresh,
    skolems: &mut Vec<Term>,
) -> Result<Term, DischargeError> {
    if let Some((q, x, _, body)) = t.as_quant() {
        let is_strong = (q == Quantifier::Forall) == pos;
        if is_strong {
            if under_weak {
                return Err(DischargeError::UnsupportedQuantifierShape(t.to_string()));
            }
            let c = Term::constant(fresh.name(), Type::Entity);
            skolems.push(c.clone());
            let inst = substitute(body, x, &c).expect("entity witness");
            return strong(&inst, pos, under_weak, fresh, skolems);
        }
        let inner = strong(body, pos, true, fresh, skolems)?;
        return Ok(Term::quant(q, x, inner));
    }
    if let Some((op, a, b)) = t.as_binary() {
        match op {
            builtin::AND | builtin::OR => {
                return Ok(Term::binop(
                    op,
                    strong(a, pos, under_weak, fresh, skolems)?,
                    strong(b, pos, under_weak, fresh, skolems)?,
                ))
            }
            builtin::IMPLIES => {
                return Ok(Term::implies(
                    strong(a, !pos, under_weak, fresh, skolems)?,
                    strong(b, pos, under_weak, fresh, skolems)?,
                ))
            }
            _ => {}
        }
    }
    if let Some(a) = t.as_not() {
        return Ok(Term::not(strong(a, !pos, under_weak, fresh, skolems)?));
    }
    if has_quantifier(t) {
        return Err(DischargeError::UnsupportedQuantifierShape(t.to_string()));
    }
    Ok(t.clone())
}

fn expand(t: &Term, grounds: &[Term]) -> Term {
    if let Some((q, x, _, body)) = t.as_quant() {
        let parts = grounds
            .iter()
            .map(|g| expand(&substitute(body, x, g).expect("entity term"), grounds));
        return match q {
            Quantifier::Forall => Term::conj(parts),
            Quantifier::Exists => Term::disj(parts),
        };
    }
    if let Some((op, a, b)) = t.as_binary() {
        if matches!(op, builtin::AND | builtin::OR | builtin::IMPLIES) {
            return Term::binop(op, expand(a, grounds), expand(b, grounds));
        }
    }
    if let Some(a) = t.as_not() {
        return Term::not(expand(a, grounds));
    }
    t.clone()
}
