use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use super::term::Term;
use super::types::{builtin, Signature, Type};

/// Step budget for beta normalisation.
pub const NORMALIZE_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TypeError {
    #[error("type mismatch: {0}")]
    Mismatch(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LambdaError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("normalisation exceeded {0} reduction steps")]
    BudgetExhausted(usize),
}

/// Checks `term` against `sig` and returns its type.
pub fn typecheck(term: &Term, sig: &Signature) -> Result<Type, TypeError> {
    let mut env: Vec<(&str, &Type)> = Vec::new();
    check(term, sig, &mut env)
}

fn check<'a>(
    term: &'a Term,
    sig: &Signature,
    env: &mut Vec<(&'a str, &'a Type)>,
) -> Result<Type, TypeError> {
    match term {
        Term::Var(x, ty) => {
            if let Some((_, bound)) = env.iter().rev().find(|(n, _)| *n == x) {
                if *bound != ty {
                    return Err(TypeError::Mismatch(format!(
                        "variable `{x}` annotated {ty} but bound at {bound}"
                    )));
                }
            }
            Ok(ty.clone())
        }
        Term::Const(c, ty) => match sig.lookup(c) {
            Some(declared) if declared == *ty => Ok(declared),
            Some(declared) => Err(TypeError::Mismatch(format!(
                "constant `{c}` used at {ty} but declared {declared}"
            ))),
            None => Err(TypeError::UnknownConstant(c.clone())),
        },
        Term::Abs(x, ty, body) => {
            env.push((x, ty));
            let b = check(body, sig, env);
            env.pop();
            Ok(Type::arrow(ty.clone(), b?))
        }
        Term::App(f, a) => {
            let ft = check(f, sig, env)?;
            let at = check(a, sig, env)?;
            match ft {
                Type::Arrow(d, c) if *d == at => Ok(*c),
                Type::Arrow(d, _) => Err(TypeError::Mismatch(format!(
                    "`{f}` expects {d} but got `{a}` of type {at}"
                ))),
                other => Err(TypeError::Mismatch(format!(
                    "`{f}` of type {other} is applied to `{a}`"
                ))),
            }
        }
    }
}

/// Type of a term from its own annotations, without a signature.
pub fn type_of(term: &Term) -> Result<Type, TypeError> {
    match term {
        Term::Var(_, t) | Term::Const(_, t) => Ok(t.clone()),
        Term::Abs(_, t, b) => Ok(Type::arrow(t.clone(), type_of(b)?)),
        Term::App(f, a) => match type_of(f)? {
            Type::Arrow(d, c) => {
                let at = type_of(a)?;
                if *d == at {
                    Ok(*c)
                } else {
                    Err(TypeError::Mismatch(format!(
                        "`{f}` expects {d} but got {at}"
                    )))
                }
            }
            other => Err(TypeError::Mismatch(format!(
                "`{f}` of type {other} is applied to an argument"
            ))),
        },
    }
}

/// Free variables with their types.
pub fn free_vars(term: &Term) -> BTreeSet<(String, Type)> {
    let mut out = BTreeSet::new();
    collect_free(term, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a>(
    term: &'a Term,
    bound: &mut Vec<&'a str>,
    out: &mut BTreeSet<(String, Type)>,
) {
    match term {
        Term::Var(x, t) => {
            if !bound.contains(&x.as_str()) {
                out.insert((x.clone(), t.clone()));
            }
        }
        Term::Const(..) => {}
        Term::Abs(x, _, b) => {
            bound.push(x);
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
    }
}

fn free_names(term: &Term) -> BTreeSet<String> {
    free_vars(term).into_iter().map(|(n, _)| n).collect()
}

pub fn is_closed(term: &Term) -> bool {
    free_vars(term).is_empty()
}

/// Capture-avoiding substitution of `replacement` for the free variable `name`.
///
/// Fails when a free occurrence of `name` has a type different from the
/// replacement's.
pub fn substitute(term: &Term, name: &str, replacement: &Term) -> Result<Term, TypeError> {
    let rty = type_of(replacement)?;
    let rfree = free_names(replacement);
    subst(term, name, replacement, &rty, &rfree)
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

fn subst(
    term: &Term,
    name: &str,
    rep: &Term,
    rty: &Type,
    rfree: &BTreeSet<String>,
) -> Result<Term, TypeError> {
    match term {
        Term::Var(x, t) if x == name => {
            if t != rty {
                return Err(TypeError::Mismatch(format!(
                    "cannot substitute {rty} term for `{x}` of type {t}"
                )));
            }
            Ok(rep.clone())
        }
        Term::Var(..) | Term::Const(..) => Ok(term.clone()),
        Term::App(f, a) => Ok(Term::app(
            subst(f, name, rep, rty, rfree)?,
            subst(a, name, rep, rty, rfree)?,
        )),
        Term::Abs(x, t, body) => {
            if x == name {
                return Ok(term.clone());
            }
            if !free_names(body).contains(name) {
                return Ok(term.clone());
            }
            if rfree.contains(x) {
                let mut avoid = BTreeSet::new();
                all_names(body, &mut avoid);
                avoid.extend(rfree.iter().cloned());
                avoid.insert(name.to_string());
                let fresh = fresh_name(x, &avoid);
                let renamed = rename_free(body, x, &fresh);
                Ok(Term::abs(fresh, t.clone(), subst(&renamed, name, rep, rty, rfree)?))
            } else {
                Ok(Term::abs(x.clone(), t.clone(), subst(body, name, rep, rty, rfree)?))
            }
        }
    }
}

fn all_names(term: &Term, out: &mut BTreeSet<String>) {
    match term {
        Term::Var(x, _) => {
            out.insert(x.clone());
        }
        Term::Const(..) => {}
        Term::Abs(x, _, b) => {
            out.insert(x.clone());
            all_names(b, out);
        }
        Term::App(f, a) => {
            all_names(f, out);
            all_names(a, out);
        }
    }
}

// `fresh` is chosen outside every name in the body, so plain renaming is safe
// as long as we stop at shadowing binders.
fn rename_free(term: &Term, from: &str, to: &str) -> Term {
    match term {
        Term::Var(x, t) if x == from => Term::Var(to.to_string(), t.clone()),
        Term::Var(..) | Term::Const(..) => term.clone(),
        Term::App(f, a) => Term::app(rename_free(f, from, to), rename_free(a, from, to)),
        Term::Abs(x, t, b) => {
            if x == from {
                term.clone()
            } else if x == to {
                // Cannot happen: `to` is fresh for the body.
                let avoid: BTreeSet<String> = [from.to_string(), to.to_string()].into();
                let fresh = fresh_name(x, &avoid);
                let inner = rename_free(b, x, &fresh);
                Term::abs(fresh, t.clone(), rename_free(&inner, from, to))
            } else {
                Term::abs(x.clone(), t.clone(), rename_free(b, from, to))
            }
        }
    }
}

/// Beta-normal form, bounded by [`NORMALIZE_BUDGET`] reduction steps.
pub fn normalize(term: &Term) -> Result<Term, LambdaError> {
    let mut steps = 0usize;
    nf(term, &mut steps)
}

fn nf(term: &Term, steps: &mut usize) -> Result<Term, LambdaError> {
    match term {
        Term::Var(..) | Term::Const(..) => Ok(term.clone()),
        Term::Abs(x, t, b) => Ok(Term::abs(x.clone(), t.clone(), nf(b, steps)?)),
        Term::App(f, a) => {
            let f = nf(f, steps)?;
            if let Term::Abs(x, _, body) = &f {
                *steps += 1;
                if *steps > NORMALIZE_BUDGET {
                    return Err(LambdaError::BudgetExhausted(NORMALIZE_BUDGET));
                }
                let reduced = substitute(body, x, a)?;
                nf(&reduced, steps)
            } else {
                Ok(Term::app(f, nf(a, steps)?))
            }
        }
    }
}

/// Replaces arithmetic and comparisons on two numeric literals by their
/// result. No other rewriting happens.
pub fn fold_constants(term: &Term) -> Term {
    match term {
        Term::Var(..) | Term::Const(..) => term.clone(),
        Term::Abs(x, t, b) => Term::abs(x.clone(), t.clone(), fold_constants(b)),
        Term::App(f, a) => {
            let folded = Term::app(fold_constants(f), fold_constants(a));
            fold_node(&folded).unwrap_or(folded)
        }
    }
}

fn fold_node(term: &Term) -> Option<Term> {
    let (op, a, b) = term.as_binary()?;
    let x = a.as_int()?;
    let y = b.as_int()?;
    Some(match op {
        builtin::PLUS => Term::int(x + y),
        builtin::MINUS => Term::int(x - y),
        builtin::TIMES => Term::int(x * y),
        builtin::EQ => Term::bool_lit(x == y),
        builtin::GT => Term::bool_lit(x > y),
        builtin::LT => Term::bool_lit(x < y),
        builtin::GE => Term::bool_lit(x >= y),
        builtin::LE => Term::bool_lit(x <= y),
        _ => return None,
    })
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    alpha(t1, t2, &mut Vec::new(), &mut Vec::new())
}

fn alpha<'a>(
    t1: &'a Term,
    t2: &'a Term,
    env1: &mut Vec<&'a str>,
    env2: &mut Vec<&'a str>,
) -> bool {
    match (t1, t2) {
        (Term::Var(x, tx), Term::Var(y, ty)) => {
            let ix = env1.iter().rposition(|n| *n == x);
            let iy = env2.iter().rposition(|n| *n == y);
            match (ix, iy) {
                (Some(i), Some(j)) => i == j && tx == ty,
                (None, None) => x == y && tx == ty,
                _ => false,
            }
        }
        (Term::Const(a, ta), Term::Const(b, tb)) => a == b && ta == tb,
        (Term::Abs(x, tx, b1), Term::Abs(y, ty, b2)) => {
            if tx != ty {
                return false;
            }
            env1.push(x);
            env2.push(y);
            let r = alpha(b1, b2, env1, env2);
            env1.pop();
            env2.pop();
            r
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            alpha(f1, f2, env1, env2) && alpha(a1, a2, env1, env2)
        }
        _ => false,
    }
}

/// A string that is equal for two terms iff they are alpha-equivalent.
pub fn canonical_key(term: &Term) -> String {
    let mut out = String::new();
    key(term, &mut Vec::new(), &mut out);
    out
}

fn key<'a>(term: &'a Term, env: &mut Vec<&'a str>, out: &mut String) {
    match term {
        Term::Var(x, t) => match env.iter().rposition(|n| *n == x) {
            Some(i) => out.push_str(&format!("#{}", env.len() - 1 - i)),
            None => out.push_str(&format!("{x}:{t}")),
        },
        Term::Const(c, t) => out.push_str(&format!("{c}:{t}")),
        Term::Abs(x, t, b) => {
            out.push_str(&format!("(\\{t}."));
            env.push(x);
            key(b, env, out);
            env.pop();
            out.push(')');
        }
        Term::App(f, a) => {
            out.push('(');
            key(f, env, out);
            out.push(' ');
            key(a, env, out);
            out.push(')');
        }
    }
}

/// Renames bound variables so that their names are distinct from every free
/// variable and constant and from each other. Used before structural
/// surgery that moves subterms across binders.
pub fn rename_bound_apart(term: &Term, avoid: &mut BTreeSet<String>) -> Term {
    match term {
        Term::Var(..) | Term::Const(..) => term.clone(),
        Term::App(f, a) => Term::app(rename_bound_apart(f, avoid), rename_bound_apart(a, avoid)),
        Term::Abs(x, t, b) => {
            let fresh = if avoid.contains(x) {
                fresh_name(x, avoid)
            } else {
                x.clone()
            };
            avoid.insert(fresh.clone());
            let body = if &fresh != x {
                substitute(b, x, &Term::Var(fresh.clone(), t.clone()))
                    .expect("renaming preserves types")
            } else {
                (**b).clone()
            };
            Term::abs(fresh, t.clone(), rename_bound_apart(&body, avoid))
        }
    }
}

/// Evaluates a closed arithmetic term built only from literals and
/// `plus`/`minus`/`times`.
pub fn eval_int_literal_expr(term: &Term) -> Option<BigInt> {
    if let Some(v) = term.as_int() {
        return Some(v);
    }
    let (op, a, b) = term.as_binary()?;
    let x = eval_int_literal_expr(a)?;
    let y = eval_int_literal_expr(b)?;
    match op {
        builtin::PLUS => Some(x + y),
        builtin::MINUS => Some(x - y),
        builtin::TIMES => Some(x * y),
        _ => None,
    }
}

/// Simultaneous substitution of constants by terms (used for ground models).
pub fn replace_consts(term: &Term, map: &HashMap<String, Term>) -> Term {
    match term {
        Term::Const(c, _) => map.get(c).cloned().unwrap_or_else(|| term.clone()),
        Term::Var(..) => term.clone(),
        Term::Abs(x, t, b) => Term::abs(x.clone(), t.clone(), replace_consts(b, map)),
        Term::App(f, a) => Term::app(replace_consts(f, map), replace_consts(a, map)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::syntax::parse_term;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.declare("balance", Type::arrow(Type::Entity, Type::Num)).unwrap();
        s.declare("valueof", Type::arrow(Type::Entity, Type::Num)).unwrap();
        s.declare("c", Type::Entity).unwrap();
        s
    }

    fn t(src: &str) -> Term {
        parse_term(src, &sig()).unwrap()
    }

    fn x() -> Term {
        Term::var("x", Type::Entity)
    }

    fn balance(arg: Term) -> Term {
        Term::call("balance", Type::Entity, Type::Num, arg)
    }

    #[test]
    fn typecheck_examples() {
        let s = sig();
        assert_eq!(typecheck(&balance(x()), &s).unwrap(), Type::Num);
        let l = Term::forall("x", Term::gt(balance(x()), Term::int(0)));
        assert_eq!(typecheck(&l, &s).unwrap(), Type::Bool);
        let bad = Term::app(x(), Term::int(0));
        assert!(matches!(typecheck(&bad, &s), Err(TypeError::Mismatch(_))));
    }

    #[test]
    fn typecheck_unknown_constant() {
        let bad = Term::call("frob", Type::Entity, Type::Num, x());
        assert_eq!(
            typecheck(&bad, &sig()),
            Err(TypeError::UnknownConstant("frob".into()))
        );
    }

    #[test]
    fn substitute_post_into_relation_body() {
        let body = t("balance(x) = _balance");
        let out = substitute(&body, "x", &Term::post(x())).unwrap();
        assert!(alpha_eq(&out, &t("balance(post(x)) = _balance")));
    }

    #[test]
    fn substitute_avoids_capture() {
        let y = Term::var("y", Type::Num);
        let lam = Term::abs("y", Type::Num, Term::plus(Term::var("x", Type::Num), y.clone()));
        let out = substitute(&lam, "x", &y).unwrap();
        let expected = Term::abs(
            "y'",
            Type::Num,
            Term::plus(y.clone(), Term::var("y'", Type::Num)),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn substitute_ground_replacement() {
        let body = Term::gt(Term::var("x", Type::Num), Term::int(0));
        let out = substitute(&body, "x", &Term::pvar("_balance")).unwrap();
        assert_eq!(out, Term::gt(Term::pvar("_balance"), Term::int(0)));
    }

    #[test]
    fn substitute_type_disagreement() {
        let body = balance(x());
        assert!(substitute(&body, "x", &Term::int(1)).is_err());
    }

    #[test]
    fn normalize_increment_composition() {
        let inc = t("lam f: Entity -> Num. forall x. f(post(x)) = f(x) + 1");
        let redex = Term::app(inc, t("lam x: Entity. balance(x)"));
        let out = normalize(&redex).unwrap();
        assert!(alpha_eq(
            &out,
            &t("forall x. balance(post(x)) = balance(x) + 1")
        ));
    }

    #[test]
    fn normalize_identity_and_nested() {
        let c = Term::constant("c", Type::Entity);
        let id = Term::abs("x", Type::Entity, x());
        assert_eq!(normalize(&Term::app(id, c.clone())).unwrap(), c);

        let yv = Term::var("y", Type::Num);
        let xv = Term::var("x", Type::Num);
        let inner = Term::app(Term::abs("y", Type::Num, Term::plus(yv, xv)), Term::int(1));
        let outer = Term::app(Term::abs("x", Type::Num, inner), Term::int(2));
        assert_eq!(
            normalize(&outer).unwrap(),
            Term::plus(Term::int(1), Term::int(2))
        );
    }

    #[test]
    fn fold_examples() {
        assert_eq!(
            fold_constants(&Term::plus(Term::int(1), Term::int(1))),
            Term::int(2)
        );
        assert_eq!(fold_constants(&Term::gt(Term::int(2), Term::int(1))), Term::tt());
        let keep = Term::plus(Term::pvar("_balance"), Term::int(0));
        assert_eq!(fold_constants(&keep), keep);
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(
            &t("forall x. balance(x) > 0"),
            &t("forall y. balance(y) > 0")
        ));
        assert!(!alpha_eq(
            &t("forall x. balance(x) > 0"),
            &t("forall x. valueof(x) > 0")
        ));
        let a = Term::abs("x", Type::Num, Term::abs("y", Type::Num, Term::var("x", Type::Num)));
        let b = Term::abs("y", Type::Num, Term::abs("x", Type::Num, Term::var("y", Type::Num)));
        assert!(alpha_eq(&a, &b));
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn free_var_examples() {
        assert!(free_vars(&t("forall x. balance(x) > 0")).is_empty());
        let fv = free_vars(&t("balance(x) = _balance"));
        assert_eq!(fv, [("x".to_string(), Type::Entity)].into());
        let lam = Term::abs(
            "x",
            Type::Num,
            Term::plus(Term::var("x", Type::Num), Term::var("y", Type::Num)),
        );
        assert_eq!(free_vars(&lam), [("y".to_string(), Type::Num)].into());
    }

    #[test]
    fn budget_guard_fires_on_ill_typed_loop() {
        // (lam x. x x)(lam x. x x) cannot be simply typed; normalisation must
        // report an error instead of diverging.
        let fty = Type::arrow(Type::Entity, Type::Entity);
        let self_app = Term::abs(
            "x",
            fty.clone(),
            Term::app(Term::var("x", fty.clone()), Term::var("x", fty.clone())),
        );
        let omega = Term::app(self_app.clone(), self_app);
        assert!(normalize(&omega).is_err());
    }
}
