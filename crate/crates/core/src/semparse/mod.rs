//! Weighted grammar-driven semantic parsing of controlled English.
//!
//! A grammar is a lexicon of typed meanings plus unary and binary rules
//! whose combinators say how child meanings compose. Parsing is CKY over
//! all derivations; each reading is scored by the sum of the weights used.

mod chart;
mod form;
mod grammar;
mod spec;

pub(crate) use chart::{ranks_before, Cell, Item};
pub use chart::{tokenize, Derivation, ParseError, ParseResult, Span, SCORE_EPS};
pub use form::SpecForm;
pub use grammar::{
    load_grammar, parse_number_token, Grammar, GrammarError, GrammarRule, LexEntry, TemplatePart,
    BUILTIN_LEXICON, BUILTIN_RULES, NUMBER_SURFACE,
};
pub use spec::{
    parse_spec_file, ScoredSpec, SpecError, SpecLine, DECLARATIVE, DEFAULT_K, IMPERATIVE,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{alpha_eq, parse_closed_term, Term};

    fn lf(g: &Grammar, src: &str) -> Term {
        parse_closed_term(src, &g.signature).unwrap()
    }

    fn top(g: &Grammar, s: &str, cat: &str) -> Term {
        g.parse_sentence(s, cat, 5).unwrap()[0].logical_form.clone()
    }

    #[test]
    fn tokenizer_lowercases_and_strips_punctuation() {
        assert_eq!(
            tokenize("All balances must be greater than zero."),
            ["all", "balances", "must", "be", "greater", "than", "zero"]
        );
        assert_eq!(tokenize("Increment the balance."), ["increment", "the", "balance"]);
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn parses_the_running_examples() {
        let g = Grammar::builtin();
        let cases = [
            ("All balances must be greater than zero.", DECLARATIVE, "forall x. balance(x) > 0"),
            ("All values must be greater than zero.", DECLARATIVE, "forall x. valueof(x) > 0"),
            (
                "Increment the balance.",
                IMPERATIVE,
                "forall x. balance(post(x)) = balance(x) + 1",
            ),
            ("the balance is greater than 0", DECLARATIVE, "forall x. balance(x) > 0"),
        ];
        for (s, cat, want) in cases {
            let got = top(&g, s, cat);
            assert!(alpha_eq(&got, &lf(&g, want)), "{s}: {got}");
        }
    }

    #[test]
    fn unknown_words_are_reported() {
        let g = Grammar::builtin();
        let err = g.parse_sentence("frobnicate the balance", IMPERATIVE, 5).unwrap_err();
        let ParseError::NoParse { unknown, longest } = err;
        assert_eq!(unknown, ["frobnicate"]);
        assert_eq!(longest.unwrap().text, "the balance");
    }

    #[test]
    fn conjunctions_nest_to_the_right() {
        let g = Grammar::builtin();
        let got = top(
            &g,
            "the balance is positive and the value is positive and the total is positive",
            DECLARATIVE,
        );
        let want = lf(
            &g,
            "(forall x. balance(x) > 0) && ((forall x. valueof(x) > 0) && (forall x. total(x) > 0))",
        );
        assert!(alpha_eq(&got, &want), "{got}");
    }

    #[test]
    fn ambiguous_nouns_give_ranked_readings() {
        let g = Grammar::builtin();
        let rs = g.parse_sentence("all amounts must be positive", DECLARATIVE, 5).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(rs[0].score > rs[1].score);
        assert!(alpha_eq(&rs[0].logical_form, &lf(&g, "forall x. balance(x) > 0")));
        assert!(alpha_eq(&rs[1].logical_form, &lf(&g, "forall x. valueof(x) > 0")));
    }

    #[test]
    fn numbers_outside_the_lexicon() {
        let g = Grammar::builtin();
        let got = top(&g, "increase the balance by 250", IMPERATIVE);
        let want = lf(&g, "forall x. balance(post(x)) = balance(x) + 250");
        assert!(alpha_eq(&got, &want), "{got}");
    }

    #[test]
    fn spec_forms_follow_the_markers() {
        let g = Grammar::builtin();
        let inv = g.parse_spec("All balances must be greater than zero.", 5).unwrap();
        assert!(matches!(&inv[0].form, SpecForm::Invariant(l) if alpha_eq(l, &lf(&g, "forall x. balance(x) > 0"))));

        let imp = g.parse_spec("Increment the balance.", 5).unwrap();
        assert_eq!(imp[0].form.kind(), "imperative");

        let cond = g
            .parse_spec("IF: the balance is greater than 0 THEN: increment the balance.", 5)
            .unwrap();
        let SpecForm::ConditionalImperative { cond: e, lf: l } = &cond[0].form else {
            panic!("{}", cond[0].form)
        };
        assert!(alpha_eq(e, &lf(&g, "forall x. balance(x) > 0")));
        assert!(alpha_eq(l, &lf(&g, "forall x. balance(post(x)) = balance(x) + 1")));

        let pp = g
            .parse_spec("IF: the balance is positive THEN AFTER: all new balances must be greater than 1", 5)
            .unwrap();
        assert_eq!(pp[0].form.kind(), "prepost");
    }

    #[test]
    fn malformed_markers() {
        let g = Grammar::builtin();
        for s in [
            "THEN: increment the balance.",
            "IF: the balance is positive",
            "IF: the balance is positive THEN: increment the balance THEN AFTER: all balances are positive",
            "the balance is positive IF: the total is positive THEN: reset the total",
            "IF: THEN: reset the total",
        ] {
            assert!(matches!(g.parse_spec(s, 5), Err(SpecError::MalformedMarkers(_))), "{s}");
        }
    }

    #[test]
    fn grammar_load_errors() {
        assert_eq!(load_grammar("", "").unwrap_err(), GrammarError::NoLexicalEntries);
        let lex = "const balance : Entity -> Num\nbalance | N | lam x. balance(x) | 1.0\n";
        assert!(load_grammar(lex, "").is_ok());
        let err = load_grammar(lex, "S -> N | #1(#2) | 0").unwrap_err();
        assert!(matches!(err, GrammarError::Syntax { line: 1, .. }), "{err}");
        let err = load_grammar("x | N | frob(x) | 0", "").unwrap_err();
        assert!(matches!(err, GrammarError::Type { line: 1, .. }), "{err}");
        let cyc = "A -> N | #1 | 0\nN2 -> A | #1 | 0\nA -> N2 | #1 | 0";
        let err = load_grammar(lex, cyc).unwrap_err();
        assert!(matches!(err, GrammarError::UnaryCycle(_)), "{err}");
        let err = load_grammar(lex, "S -> N | #1 | 0 | #3").unwrap_err();
        assert!(matches!(err, GrammarError::Syntax { .. }), "{err}");
    }

    #[test]
    fn spec_files_have_optional_labels() {
        let lines = parse_spec_file("# corpus\npositive: all balances are positive\n\nIF: the balance is positive THEN: reset the balance\n");
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].name, "positive");
        assert_eq!(lines[0].text, "all balances are positive");
        assert_eq!(lines[1].name, "line4");
        assert!(lines[1].text.starts_with("IF:"));
    }
}
