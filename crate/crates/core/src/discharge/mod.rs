//! Discharging verification conditions.
//!
//! [`decide`] is sound: `Valid` is only returned after the negated,
//! Skolemized and abstracted formula has been refuted by Fourier-Motzkin,
//! and `Invalid` only with a finite structure that falsifies the original
//! formula. Anything else is `Unknown`.

mod abstraction;
mod brute;
mod decide;
mod linear;
mod refute;
mod saturate;
mod skolem;
mod smtlib;
mod util;
mod verdict;

pub use abstraction::{abstract_uninterpreted, Abstraction};
pub use brute::{
    brute_force, brute_force_with_budget, BoundedVerdict, BruteForceError, BRUTE_FORCE_BUDGET,
};
pub use decide::{decide, decide_formula, DecideOptions};
pub use linear::{lia_valid, LiaOutcome};
pub use saturate::{saturate_equalities, GroundFact, REWRITE_BUDGET};
pub use skolem::skolemize_and_instantiate;
pub use smtlib::{export_smtlib, smtlib_script};
pub use util::{ground_entity_terms, join_implication, split_implication};
pub use verdict::{Model, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DischargeError {
    #[error("unsupported quantifier shape in `{0}`")]
    UnsupportedQuantifierShape(String),
    #[error("equational rewriting exceeded {} steps", REWRITE_BUDGET)]
    RewriteBudgetExceeded,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hoare::{Provenance, Vc};
    use crate::kb::{load_kb, KnowledgeBase};
    use crate::lambda::{parse_term, Signature, Term, Type};

    fn sig() -> Signature {
        let mut s = Signature::new();
        for f in ["balance", "valueof", "g"] {
            s.declare(f, Type::arrow(Type::Entity, Type::Num)).unwrap();
        }
        s.declare("f", Type::arrow(Type::Num, Type::Num)).unwrap();
        s.declare("c1", Type::Entity).unwrap();
        s.declare("c", Type::Entity).unwrap();
        s
    }

    fn t(src: &str) -> Term {
        parse_term(src, &sig()).unwrap()
    }

    fn verdict(src: &str) -> Verdict {
        decide_formula(&t(src), &KnowledgeBase::default(), &DecideOptions::default())
    }

    const IMPERATIVE_VC: &str = "(forall x. balance(post(x)) = balance(x) + 1) && (exists x. balance(x) = _balance) \
        => (forall x. balance(post(x)) = balance(x) + 1) && (exists x. balance(post(x)) = _balance + 1)";

    #[test]
    fn skolemizes_hypothesis_witness() {
        let f = t("(forall x. balance(x) > 0) && (exists x. balance(x) = _balance) => _balance > 0");
        assert_eq!(
            skolemize_and_instantiate(&f).unwrap(),
            t("balance(c1) > 0 && balance(c1) = _balance => _balance > 0")
        );
        let plain = t("_b > 0 => _b + 1 > 0");
        assert_eq!(skolemize_and_instantiate(&plain).unwrap(), plain);
    }

    #[test]
    fn imperative_vc_instantiates_over_post_images() {
        let g = skolemize_and_instantiate(&t(IMPERATIVE_VC)).unwrap();
        assert!(g.contains(&t("balance(post(c1))")));
        assert!(!g.mentions_const("forall") && !g.mentions_const("exists"));
    }

    #[test]
    fn strong_under_weak_is_unsupported() {
        let f = t("(forall x. exists y. balance(x) = balance(y)) => _a > 0");
        assert!(matches!(
            skolemize_and_instantiate(&f),
            Err(DischargeError::UnsupportedQuantifierShape(_))
        ));
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(
            saturate_equalities(&t("balance(c) > 0 && balance(c) = _balance => _balance > 0")).unwrap(),
            t("_balance > 0 && balance(c) = _balance => _balance > 0")
        );
        let plain = t("_a > 0 => _a >= 0");
        assert_eq!(saturate_equalities(&plain).unwrap(), plain);
        let chained = saturate_equalities(&t("balance(c) = g(c) && g(c) = _v => balance(c) > 0")).unwrap();
        let (_, goal) = split_implication(&chained);
        assert_eq!(goal, t("_v > 0"));
    }

    #[test]
    fn abstraction_examples() {
        let (a, m) = abstract_uninterpreted(&t(
            "balance(post(c)) = _balance + 1 => balance(post(c)) = _balance + 1",
        ));
        assert_eq!(m.ints.len(), 1);
        assert_eq!(m.ints[0].0, t("balance(post(c))"));
        let v = Term::constant(m.ints[0].1.clone(), Type::Num);
        let e = Term::eq(v, t("_balance + 1"));
        assert_eq!(a, Term::implies(e.clone(), e));

        let pure = t("_a > 0 => _a + 1 > 1");
        assert_eq!(abstract_uninterpreted(&pure).0, pure);
        let (_, m) = abstract_uninterpreted(&t("balance(c) > g(c)"));
        assert_eq!(m.ints.len(), 2);
        assert_ne!(m.ints[0].1, m.ints[1].1);
    }

    #[test]
    fn decides_running_example_vcs() {
        assert_eq!(
            verdict("(forall x. balance(x) > 0) && (exists x. balance(x) = _balance) => _balance > 0"),
            Verdict::Valid
        );
        assert_eq!(verdict("_balance > 0 => _balance + 1 > 0"), Verdict::Valid);
        assert_eq!(verdict(IMPERATIVE_VC), Verdict::Valid);
    }

    #[test]
    fn off_by_one_is_refuted_at_the_boundary() {
        let f = t("_balance > 0 => _balance - 1 > 0");
        let Verdict::Invalid(m) = verdict("_balance > 0 => _balance - 1 > 0") else {
            panic!("expected a countermodel");
        };
        assert_eq!(m.get("_balance"), Some("1"));
        assert_eq!(m.satisfies(&f), Ok(false));
    }

    #[test]
    fn refutes_through_uninterpreted_terms() {
        let f = t("(exists x. balance(x) = _b) => _b > 0");
        let Verdict::Invalid(m) = verdict("(exists x. balance(x) = _b) => _b > 0") else {
            panic!("expected a countermodel");
        };
        assert_eq!(m.satisfies(&f), Ok(false));
    }

    #[test]
    fn congruence_is_unknown_but_valid_in_bounds() {
        let src = "_a = _b => f(_a) = f(_b)";
        let opts = DecideOptions {
            bound: 4,
            search_budget: 20_000,
        };
        let v = decide_formula(&t(src), &KnowledgeBase::default(), &opts);
        assert!(v.is_unknown(), "{v}");
        assert_eq!(brute_force(&t(src), 2, 1), Ok(BoundedVerdict::ValidInBounds));
    }

    #[test]
    fn kb_equalities_are_used() {
        let mut s = sig();
        s.declare("x0", Type::Entity).unwrap();
        let kb = load_kb("equal balance valueof", &s).unwrap();
        let f = t("(forall x. valueof(x) > 0) && (exists x. balance(x) = _balance) => _balance > 0");
        assert!(decide_formula(&f, &KnowledgeBase::default(), &DecideOptions::default()).is_invalid());
        assert_eq!(decide_formula(&f, &kb, &DecideOptions::default()), Verdict::Valid);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force(
                &t("(forall x. balance(x) > 0) && (exists x. balance(x) = _balance) => _balance > 0"),
                2,
                1
            ),
            Ok(BoundedVerdict::ValidInBounds)
        );
        let Ok(BoundedVerdict::Invalid(m)) = brute_force(&t("_balance > 0 => _balance - 1 > 0"), 2, 1)
        else {
            panic!("expected a countermodel");
        };
        assert_eq!(m.get("_balance"), Some("1"));
        assert_eq!(brute_force(&Term::tt(), 2, 1), Ok(BoundedVerdict::ValidInBounds));
        assert!(matches!(
            brute_force_with_budget(&t(IMPERATIVE_VC), 4, 3, 10),
            Err(BruteForceError::CostExceeded(_))
        ));
    }

    #[test]
    fn smtlib_examples() {
        let vc = Vc::new(t("_balance > 0 => _balance + 1 > 0"), Provenance::Main);
        let s = export_smtlib(&vc);
        assert!(s.contains("(set-logic AUFLIA)"));
        assert!(s.contains("(declare-fun _balance () Int)"));
        assert!(s.contains("(assert (not (=> (> _balance 0) (> (+ _balance 1) 0))))"));
        assert!(s.ends_with("(check-sat)\n"));

        let s = smtlib_script(&t(IMPERATIVE_VC), None);
        assert!(s.contains("(declare-fun balance (Entity) Int)"));
        assert!(s.contains("(declare-fun post (Entity) Entity)"));
        assert!(s.contains("(exists ((x Entity))"));
        let b = s.find("declare-fun balance").unwrap();
        let p = s.find("declare-fun post").unwrap();
        assert!(b < p);
        assert!(smtlib_script(&t("_x > -3"), None).contains("(> _x (- 3))"));
    }
}
