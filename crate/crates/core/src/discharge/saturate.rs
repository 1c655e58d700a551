use crate::lambda::{builtin, Term};

use super::util::{is_interpreted, join_implication, split_implication};
use super::DischargeError;

/// Rewrite budget for [`saturate_equalities`].
pub const REWRITE_BUDGET: usize = 1000;

/// An oriented hypothesis equation `lhs = rhs` used left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundFact {
    pub lhs: Term,
    pub rhs: Term,
}

fn head_uninterpreted(t: &Term) -> bool {
    match t.spine().0 {
        Term::Const(c, _) => !is_interpreted(c),
        _ => false,
    }
}

fn is_pure(t: &Term) -> bool {
    let mut pure = true;
    t.for_each_const(&mut |n, _| pure &= is_interpreted(n));
    pure
}

/// Orients `a = b`. The left side must be an uninterpreted application (or
/// constant) not occurring on the right. Pure arithmetic right sides are
/// preferred, then the larger side rewrites to the smaller one.
pub(crate) fn orient(a: &Term, b: &Term) -> Option<GroundFact> {
    let ok = |l: &Term, r: &Term| head_uninterpreted(l) && !r.contains(l);
    let fact = |l: &Term, r: &Term| GroundFact {
        lhs: l.clone(),
        rhs: r.clone(),
    };
    match (ok(a, b), ok(b, a)) {
        (true, false) => Some(fact(a, b)),
        (false, true) => Some(fact(b, a)),
        (false, false) => None,
        (true, true) => {
            let key = |t: &Term| (is_pure(t), std::cmp::Reverse((t.size(), t.to_string())));
            // The side with the better key becomes the right-hand side.
            if key(b) >= key(a) {
                Some(fact(a, b))
            } else {
                Some(fact(b, a))
            }
        }
    }
}

fn as_eq(t: &Term) -> Option<(&Term, &Term)> {
    match t.as_binary() {
        Some((builtin::EQ, a, b)) => Some((a, b)),
        _ => None,
    }
}

/// Uses the equations among the hypothesis conjuncts as rewrite rules and
/// applies them everywhere else until nothing changes.
pub fn saturate_equalities(formula: &Term) -> Result<Term, DischargeError> {
    saturate(formula).map(|(t, _)| t)
}

pub(crate) fn saturate(formula: &Term) -> Result<(Term, Vec<GroundFact>), DischargeError> {
    let (hyps, goal) = split_implication(formula);
    if hyps.is_empty() {
        return Ok((formula.clone(), Vec::new()));
    }
    let n = hyps.len();
    let mut items = hyps;
    items.push(goal);
    let mut used = vec![false; n];
    let mut rewrites = 0;
    'outer: loop {
        for i in 0..n {
            let Some((a, b)) = as_eq(&items[i]) else {
                continue;
            };
            let Some(f) = orient(a, b) else {
                continue;
            };
            let hit: Vec<usize> = (0..items.len())
                .filter(|&j| j != i && items[j].contains(&f.lhs))
                .collect();
            if hit.is_empty() {
                continue;
            }
            rewrites += 1;
            if rewrites > REWRITE_BUDGET {
                return Err(DischargeError::RewriteBudgetExceeded);
            }
            for j in hit {
                items[j] = items[j].replace(&f.lhs, &f.rhs);
            }
            used[i] = true;
            continue 'outer;
        }
        break;
    }
    let facts = (0..n)
        .filter(|&i| used[i])
        .filter_map(|i| as_eq(&items[i]).and_then(|(a, b)| orient(a, b)))
        .collect();
    let goal = items.pop().expect("goal");
    Ok((join_implication(items, goal), facts))
}
