use std::fmt;

use crate::lambda::Term;

/// The four specification shapes, selected by the `IF:` / `THEN:` /
/// `THEN AFTER:` markers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpecForm {
    Invariant(Term),
    Imperative(Term),
    ConditionalImperative { cond: Term, lf: Term },
    PrePost { pre: Term, post: Term },
}

impl SpecForm {
    pub fn kind(&self) -> &'static str {
        match self {
            SpecForm::Invariant(_) => "invariant",
            SpecForm::Imperative(_) => "imperative",
            SpecForm::ConditionalImperative { .. } => "conditional",
            SpecForm::PrePost { .. } => "prepost",
        }
    }

    /// Component logical forms in marker order.
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            SpecForm::Invariant(l) | SpecForm::Imperative(l) => vec![l],
            SpecForm::ConditionalImperative { cond, lf } => vec![cond, lf],
            SpecForm::PrePost { pre, post } => vec![pre, post],
        }
    }

    /// Rebuilds the same variant from component terms in marker order.
    pub fn from_parts(kind: &str, mut terms: Vec<Term>) -> Option<SpecForm> {
        let arity = if matches!(kind, "invariant" | "imperative") { 1 } else { 2 };
        if terms.len() != arity {
            return None;
        }
        let b = terms.pop();
        let a = terms.pop();
        Some(match (kind, a, b) {
            ("invariant", None, Some(l)) => SpecForm::Invariant(l),
            ("imperative", None, Some(l)) => SpecForm::Imperative(l),
            ("conditional", Some(cond), Some(lf)) => SpecForm::ConditionalImperative { cond, lf },
            ("prepost", Some(pre), Some(post)) => SpecForm::PrePost { pre, post },
            _ => return None,
        })
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> SpecForm {
        let parts = self.terms().into_iter().map(&mut f).collect();
        SpecForm::from_parts(self.kind(), parts).expect("same shape")
    }
}

impl fmt::Display for SpecForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecForm::Invariant(l) => write!(f, "invariant {l}"),
            SpecForm::Imperative(l) => write!(f, "imperative {l}"),
            SpecForm::ConditionalImperative { cond, lf } => {
                write!(f, "IF: {cond} THEN: {lf}")
            }
            SpecForm::PrePost { pre, post } => write!(f, "IF: {pre} THEN AFTER: {post}"),
        }
    }
}
