//! Generation of English from logical forms, and the "Did you mean" loop.
//!
//! Generation runs the grammar backwards: starting from lexical entries
//! whose meanings only use constants of the target, rules are applied
//! bottom-up until a sentence-level constituent with exactly the target
//! meaning appears. Its words come from the rule templates.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::lambda::{canonical_key, type_of, Term, Type};
use crate::semparse::{
    ranks_before, Cell, Derivation, Grammar, Item, ParseResult, SpecForm, DECLARATIVE,
    IMPERATIVE,
};

/// Derivations deeper than this are not explored.
pub const MAX_DEPTH: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("no sentence of the grammar means `{0}`")]
    NotRealizable(String),
}

fn constants(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    t.for_each_const(&mut |c, _| {
        out.insert(c.to_string());
    });
    out
}

/// Canonical keys of every closed subterm.
fn subterm_keys(t: &Term, out: &mut BTreeSet<String>) {
    if crate::lambda::is_closed(t) {
        out.insert(canonical_key(t));
    }
    match t {
        Term::App(f, a) => {
            subterm_keys(f, out);
            subterm_keys(a, out);
        }
        Term::Abs(_, _, b) => subterm_keys(b, out),
        _ => {}
    }
}

fn within(cs: &BTreeSet<String>, allowed: &BTreeSet<String>) -> bool {
    cs.iter().all(|c| allowed.contains(c))
}

/// Renders `lf` as a sentence of category `start`.
pub fn render_as(lf: &Term, grammar: &Grammar, start: &str) -> Result<String, RenderError> {
    generate(lf, grammar, &[start])
}

/// Renders a closed boolean logical form, declarative or imperative.
pub fn render(lf: &Term, grammar: &Grammar) -> Result<String, RenderError> {
    generate(lf, grammar, &[DECLARATIVE, IMPERATIVE])
}

fn generate(lf: &Term, g: &Grammar, starts: &[&str]) -> Result<String, RenderError> {
    let not_realizable = || RenderError::NotRealizable(lf.to_string());
    let allowed = constants(lf);
    let target = canonical_key(lf);
    let max_size = 2 * lf.size() + 20;
    // Combinators never discard a closed proposition, so a boolean
    // constituent that is not part of the target is a dead end.
    let mut props = BTreeSet::new();
    subterm_keys(lf, &mut props);

    let mut chart = Cell::default();
    for (ei, e) in g.lexicon.iter().enumerate() {
        if e.is_number() {
            for c in allowed.iter().filter(|c| crate::lambda::is_numeral(c)) {
                let tokens = vec![c.clone()];
                if let Some(sem) = e.instantiate(&tokens) {
                    let d = Derivation::Lex { entry: ei, tokens };
                    chart.add(&e.category, g.make_item(d, sem, e.weight));
                }
            }
            continue;
        }
        if within(&constants(&e.semantics), &allowed) {
            let d = Derivation::Lex {
                entry: ei,
                tokens: e.surface.clone(),
            };
            chart.add(&e.category, g.make_item(d, e.semantics.clone(), e.weight));
        }
    }

    for _round in 1..MAX_DEPTH {
        let snapshot: Vec<(String, Item)> = chart
            .by_cat
            .iter()
            .flat_map(|(c, m)| m.values().map(move |it| (c.clone(), it.clone())))
            .collect();
        let of = |cat: &str| -> Vec<&Item> {
            snapshot.iter().filter(|(c, _)| c == cat).map(|(_, it)| it).collect()
        };
        let mut changed = false;
        for (ri, r) in g.rules.iter().enumerate() {
            let lists: Vec<Vec<&Item>> = r.rhs.iter().map(|c| of(c)).collect();
            let combos: Vec<Vec<&Item>> = match lists.as_slice() {
                [a] => a.iter().map(|x| vec![*x]).collect(),
                [a, b] => a
                    .iter()
                    .flat_map(|x| b.iter().map(move |y| vec![*x, *y]))
                    .collect(),
                _ => Vec::new(),
            };
            for kids in combos {
                let sems: Vec<&Term> = kids.iter().map(|k| &k.sem).collect();
                let Some(sem) = r.compose(&sems) else { continue };
                if sem.size() > max_size || !within(&constants(&sem), &allowed) {
                    continue;
                }
                if type_of(&sem).is_ok_and(|t| t == Type::Bool) && !props.contains(&canonical_key(&sem)) {
                    continue;
                }
                let d = Derivation::Rule {
                    rule: ri,
                    children: kids.iter().map(|k| Arc::clone(&k.deriv)).collect(),
                };
                if d.depth() > MAX_DEPTH {
                    continue;
                }
                let score = r.weight + kids.iter().map(|k| k.score).sum::<f64>();
                changed |= chart.add(&r.lhs, g.make_item(d, sem, score));
            }
        }
        if !changed {
            break;
        }
    }

    let best = starts
        .iter()
        .filter_map(|s| chart.by_cat.get(*s).and_then(|m| m.get(&target)))
        .reduce(|a, b| {
            if ranks_before(b.score, &b.serial, a.score, &a.serial) {
                b
            } else {
                a
            }
        })
        .ok_or_else(not_realizable)?;
    Ok(best.deriv.words(g).join(" "))
}

/// Renders every component of a specification and restores its markers.
pub fn render_spec(form: &SpecForm, grammar: &Grammar) -> Result<String, RenderError> {
    Ok(match form {
        SpecForm::Invariant(l) => render_as(l, grammar, DECLARATIVE)?,
        SpecForm::Imperative(l) => render_as(l, grammar, IMPERATIVE)?,
        SpecForm::ConditionalImperative { cond, lf } => format!(
            "IF: {} THEN: {}",
            render_as(cond, grammar, DECLARATIVE)?,
            render_as(lf, grammar, IMPERATIVE)?
        ),
        SpecForm::PrePost { pre, post } => format!(
            "IF: {} THEN AFTER: {}",
            render_as(pre, grammar, DECLARATIVE)?,
            render_as(post, grammar, DECLARATIVE)?
        ),
    })
}

pub fn prompt_for(sentence: &str) -> String {
    format!("Did you mean: {sentence}? [y/n]")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Index of the accepted candidate.
    Selected(usize),
    /// Every candidate was rejected; the user should rephrase.
    RephraseRequest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    /// Prompts shown, in order.
    pub prompts: Vec<String>,
    pub outcome: Outcome,
}

/// Offers each rendered candidate in turn until `accept` says yes.
pub fn disambiguate(sentences: &[String], mut accept: impl FnMut(&str) -> bool) -> Transcript {
    let mut prompts = Vec::new();
    for (i, s) in sentences.iter().enumerate() {
        let p = prompt_for(s);
        let yes = accept(&p);
        prompts.push(p);
        if yes {
            return Transcript {
                prompts,
                outcome: Outcome::Selected(i),
            };
        }
    }
    Transcript {
        prompts,
        outcome: Outcome::RephraseRequest,
    }
}

/// The disambiguation loop over parse results in score order. Candidates
/// that cannot be rendered are shown in term syntax.
pub fn disambiguation_prompt(
    candidates: &[ParseResult],
    grammar: &Grammar,
    accept: impl FnMut(&str) -> bool,
) -> Transcript {
    let sentences: Vec<String> = candidates
        .iter()
        .map(|c| render(&c.logical_form, grammar).unwrap_or_else(|_| c.logical_form.to_string()))
        .collect();
    disambiguate(&sentences, accept)
}
