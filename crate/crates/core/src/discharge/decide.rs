use crate::hoare::Vc;
use crate::kb::{apply_kb, KnowledgeBase};
use crate::lambda::{fold_constants, Term};

use super::abstraction::abstract_uninterpreted;
use super::linear::{lia_valid, LiaOutcome};
use super::refute::{refute, Context, Refutation};
use super::saturate::saturate;
use super::skolem::skolemize;
use super::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    /// Integers in `[-bound, bound]` are tried by the refutation search.
    pub bound: i128,
    /// Assignments visited by the refutation search.
    pub search_budget: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            bound: 64,
            search_budget: 1_000_000,
        }
    }
}

pub fn decide(vc: &Vc, kb: &KnowledgeBase) -> Verdict {
    decide_formula(&vc.formula, kb, &DecideOptions::default())
}

/// apply_kb, Skolemize and instantiate, apply_kb again at the new ground
/// terms, saturate equalities, fold literals, abstract, then Fourier-Motzkin;
/// failing a proof, search for a countermodel.
pub fn decide_formula(formula: &Term, kb: &KnowledgeBase, opts: &DecideOptions) -> Verdict {
    let f0 = apply_kb(formula, kb);
    let sk = match skolemize(&f0) {
        Ok(s) => s,
        Err(e) => return Verdict::Unknown(e.to_string()),
    };
    let f1 = apply_kb(&sk.term, kb);
    let (f2, facts) = match saturate(&f1) {
        Ok(r) => r,
        Err(e) => return Verdict::Unknown(e.to_string()),
    };
    let f3 = fold_constants(&f2);
    let (f4, abstraction) = abstract_uninterpreted(&f3);
    let why = match lia_valid(&f4) {
        LiaOutcome::Valid => return Verdict::Valid,
        LiaOutcome::NotProven => "not provable by linear arithmetic".to_string(),
        LiaOutcome::Unknown(r) => r,
    };
    let original = kb.as_hypothesis(formula);
    let ctx = Context {
        original: &original,
        ground: &f1,
        grounds: &sk.grounds,
        facts: &facts,
        abstraction: &abstraction,
        kb,
    };
    match refute(&f4, &ctx, opts.bound, opts.search_budget) {
        Ok(Refutation::Found(m)) => Verdict::Invalid(m),
        Ok(Refutation::Exhausted) => Verdict::Unknown(format!(
            "{why}; no countermodel with values in [-{b}, {b}]",
            b = opts.bound
        )),
        Ok(Refutation::OutOfBudget) => {
            Verdict::Unknown(format!("{why}; countermodel search budget exhausted"))
        }
        Err(e) => Verdict::Unknown(format!("{why}; {e}")),
    }
}
