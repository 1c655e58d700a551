use crate::lambda::{builtin, type_of, Term, Type};

/// Splits `H1 => (H2 => ... => G)` into the flattened hypothesis conjuncts
/// and the goal. A formula without a top-level implication has no
/// hypotheses.
pub fn split_implication(formula: &Term) -> (Vec<Term>, Term) {
    let mut hyps = Vec::new();
    let mut cur = formula;
    while let Some((h, g)) = cur.as_implies() {
        hyps.extend(h.conjuncts().into_iter().cloned());
        cur = g;
    }
    (hyps, cur.clone())
}

/// Inverse of [`split_implication`].
pub fn join_implication(hyps: Vec<Term>, goal: Term) -> Term {
    if hyps.is_empty() {
        goal
    } else {
        Term::implies(Term::conj(hyps), goal)
    }
}

/// Closed subterms of type `Entity`, in first-occurrence order.
pub fn ground_entity_terms(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    collect_ground(t, &mut Vec::new(), &mut out);
    out
}

fn collect_ground(t: &Term, bound: &mut Vec<String>, out: &mut Vec<Term>) -> bool {
    let ground = match t {
        Term::Var(x, _) => !bound.contains(x),
        Term::Const(..) => true,
        Term::Abs(x, _, b) => {
            bound.push(x.clone());
            let g = collect_ground(b, bound, out);
            bound.pop();
            g
        }
        Term::App(f, a) => {
            let gf = collect_ground(f, bound, out);
            let ga = collect_ground(a, bound, out);
            gf && ga
        }
    };
    let ground = ground && !matches!(t, Term::Var(..));
    if ground && type_of(t).ok() == Some(Type::Entity) && !out.contains(t) {
        out.push(t.clone());
    }
    ground
}

/// True for constants that the prover interprets: connectives, arithmetic,
/// comparisons, literals and program variables.
pub fn is_interpreted(name: &str) -> bool {
    (crate::lambda::Signature::is_builtin(name) && name != builtin::POST)
        || crate::lambda::is_numeral(name)
        || crate::lambda::is_program_var(name)
}
