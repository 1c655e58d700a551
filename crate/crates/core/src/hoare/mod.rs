//! Relations between logical forms and program variables, the four
//! triple-construction schemas, weakest preconditions and VC generation.

mod relation;
mod triple;
mod wp;

pub use relation::{load_relation, prime, relation_formula, Binding, LfplRelation, RelationError};
pub use triple::{build_triple, project_invariant, HoareTriple};
pub use wp::{generate_vcs, wp, Provenance, Vc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HoareError {
    #[error("invariant projection kept no conjunct: the relation does not connect the logical form to any program variable")]
    VacuousProjection,
    #[error("projected invariant still mentions logical-form symbols: {}", .0.join(", "))]
    ResidualSymbols(Vec<String>),
    #[error("the IF: condition of a conditional imperative may not mention post")]
    PostInCondition,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::parse_program;
    use crate::lambda::{alpha_eq, parse_term, Signature, Term, Type};
    use crate::semparse::SpecForm;

    fn sig() -> Signature {
        let mut s = Signature::new();
        for f in ["balance", "valueof", "f", "g"] {
            s.declare(f, Type::arrow(Type::Entity, Type::Num)).unwrap();
        }
        s
    }

    fn t(src: &str) -> Term {
        parse_term(src, &sig()).unwrap()
    }

    fn rel(src: &str) -> LfplRelation {
        load_relation(src, &sig()).unwrap()
    }

    #[test]
    fn loads_relation_files() {
        let r = rel("# account balance\nbalance(x) = _balance\n");
        assert_eq!(r.logical_vars, vec!["x"]);
        assert_eq!(r.bindings[0].program_var, "_balance");
        assert!(matches!(
            load_relation("balance(x) = _a\nvalueof(x) = _a", &sig()),
            Err(RelationError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            load_relation("balance(x) > _a", &sig()),
            Err(RelationError::Shape { line: 1 })
        ));
        assert!(load_relation("nosuch(x) = _a", &sig()).is_err());
    }

    #[test]
    fn prime_examples() {
        let p = prime(&rel("balance(x) = _balance"));
        assert_eq!(p.bindings[0].body, t("balance(post(x))"));
        let p = prime(&rel("f(x) = _a\ng(y) = _b"));
        assert_eq!(p.logical_vars, vec!["x", "y"]);
        assert_eq!(p.bindings[0].body, t("f(post(x))"));
        assert_eq!(p.bindings[1].body, t("g(post(y))"));
        assert!(prime(&LfplRelation::default()).is_empty());
    }

    #[test]
    fn relation_formula_examples() {
        assert!(alpha_eq(
            &relation_formula(&rel("balance(x) = _balance")),
            &t("exists x. balance(x) = _balance")
        ));
        assert!(alpha_eq(
            &relation_formula(&rel("valueof(y) = _balance")),
            &t("exists x. valueof(x) = _balance")
        ));
        assert_eq!(relation_formula(&LfplRelation::default()), Term::tt());
        let r = rel("f(x) = _a\ng(y) = _b");
        assert!(alpha_eq(
            &relation_formula(&prime(&r)),
            &t("exists x. exists y. f(post(x)) = _a && g(post(y)) = _b")
        ));
    }

    #[test]
    fn projection_examples() {
        let r = rel("balance(x) = _balance");
        assert_eq!(
            project_invariant(&t("forall x. balance(x) > 0"), &r).unwrap(),
            t("_balance > 0")
        );
        let rv = rel("valueof(x) = _balance");
        assert_eq!(
            project_invariant(&t("forall x. valueof(x) > 0"), &rv).unwrap(),
            t("_balance > 0")
        );
        assert_eq!(
            project_invariant(&t("forall x. valueof(x) > 0"), &r),
            Err(HoareError::VacuousProjection)
        );
    }

    #[test]
    fn projection_over_two_variables_keeps_only_bound_facts() {
        let r = rel("f(x) = _a\ng(y) = _b");
        let i = project_invariant(&t("(forall z. f(z) > 0) && (forall z. g(z) >= f(z))"), &r)
            .unwrap();
        assert_eq!(i, t("_a > 0"));
    }

    #[test]
    fn projection_reports_residual_symbols() {
        let mut s = sig();
        s.declare("limit", Type::Num).unwrap();
        let l = parse_term("forall x. balance(x) > limit", &s).unwrap();
        let r = rel("balance(x) = _balance");
        assert_eq!(
            project_invariant(&l, &r),
            Err(HoareError::ResidualSymbols(vec!["limit".into()]))
        );
    }

    #[test]
    fn triple_schemas() {
        let r = rel("balance(x) = _balance");
        let prog = parse_program("_balance := _balance + 1").unwrap();
        let inv = build_triple(&SpecForm::Invariant(t("forall x. balance(x) > 0")), &r, &prog)
            .unwrap();
        assert!(alpha_eq(&inv.pre, &t("_balance > 0")));
        assert!(alpha_eq(&inv.post, &t("_balance > 0")));

        let l = t("forall x. balance(post(x)) = balance(x) + 1");
        let imp = build_triple(&SpecForm::Imperative(l.clone()), &r, &prog).unwrap();
        assert!(alpha_eq(
            &imp.pre,
            &Term::and(l.clone(), t("exists x. balance(x) = _balance"))
        ));
        assert!(alpha_eq(
            &imp.post,
            &Term::and(l.clone(), t("exists x. balance(post(x)) = _balance"))
        ));

        let e = t("forall x. balance(x) > 0");
        let cond = SpecForm::ConditionalImperative {
            cond: e.clone(),
            lf: l.clone(),
        };
        let ci = build_triple(&cond, &r, &prog).unwrap();
        assert!(alpha_eq(
            &ci.pre,
            &Term::and(Term::and(l.clone(), t("exists x. balance(x) = _balance")), e.clone())
        ));
        let bad = SpecForm::ConditionalImperative { cond: l.clone(), lf: l };
        assert_eq!(build_triple(&bad, &r, &prog), Err(HoareError::PostInCondition));

        let l2 = t("forall x. balance(post(x)) > 1");
        let pp = SpecForm::PrePost { pre: e.clone(), post: l2.clone() };
        let tr = build_triple(&pp, &r, &prog).unwrap();
        assert!(alpha_eq(&tr.pre, &Term::and(e, t("exists x. balance(x) = _balance"))));
        assert!(alpha_eq(&tr.post, &Term::and(l2, t("exists x. balance(post(x)) = _balance"))));
    }

    #[test]
    fn wp_examples() {
        let prog = parse_program("_balance := _balance + 1").unwrap();
        let (w, side) = wp(&prog, &t("_balance > 0"));
        assert_eq!(w, t("_balance + 1 > 0"));
        assert!(side.is_empty());

        let l = t("forall x. balance(post(x)) = balance(x) + 1");
        let q = Term::and(l.clone(), t("exists x. balance(post(x)) = _balance"));
        let (w, _) = wp(&prog, &q);
        assert!(alpha_eq(
            &w,
            &Term::and(l, t("exists x. balance(post(x)) = _balance + 1"))
        ));

        let lp = parse_program("while _n > 0 invariant _s >= 0 do _s := _s + _n; _n := _n - 1 od")
            .unwrap();
        let (w, side) = wp(&lp, &t("_s >= 0"));
        assert_eq!(w, t("_s >= 0"));
        assert_eq!(side.len(), 2);
        assert_eq!(side[0].formula, t("_s >= 0 && _n > 0 => _s + _n >= 0"));
        assert_eq!(side[1].formula, t("_s >= 0 && !(_n > 0) => _s >= 0"));
    }

    #[test]
    fn conditional_wp() {
        let prog = parse_program("if _b > 0 then _b := 0 else skip fi").unwrap();
        let (w, _) = wp(&prog, &t("_b <= 0"));
        assert_eq!(w, t("(_b > 0 => 0 <= 0) && (!(_b > 0) => _b <= 0)"));
    }

    #[test]
    fn vc_generation_counts_and_order() {
        let r = rel("balance(x) = _balance");
        let prog = parse_program("_balance := _balance + 1").unwrap();
        let tr = build_triple(&SpecForm::Invariant(t("forall x. balance(x) > 0")), &r, &prog)
            .unwrap();
        let vcs = generate_vcs(&tr);
        assert_eq!(vcs.len(), 1);
        assert_eq!(vcs[0].formula, t("_balance > 0 => _balance + 1 > 0"));

        let skip = HoareTriple {
            pre: t("_a > 0"),
            program: parse_program("skip").unwrap(),
            post: t("_a >= 0"),
        };
        assert_eq!(generate_vcs(&skip)[0].formula, t("_a > 0 => _a >= 0"));

        let nested = parse_program(
            "while _a > 0 invariant true do while _b > 0 invariant true do _b := _b - 1 od; _a := _a - 1 od; \
             while _c > 0 invariant true do _c := _c - 1 od",
        )
        .unwrap();
        let tr = HoareTriple { pre: Term::tt(), program: nested, post: Term::tt() };
        let provs: Vec<String> = generate_vcs(&tr).iter().map(|v| v.provenance.to_string()).collect();
        assert_eq!(
            provs,
            [
                "main",
                "loop-preservation(1)",
                "loop-exit(1)",
                "loop-preservation(2)",
                "loop-exit(2)",
                "loop-preservation(3)",
                "loop-exit(3)"
            ]
        );
    }
}
