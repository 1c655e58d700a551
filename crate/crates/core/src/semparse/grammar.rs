use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::lambda::{
    parse_term_with, parse_type, typecheck, ParseOptions, Signature, Term, Type,
};

/// Surface of the lexical entry that matches any integer token.
pub const NUMBER_SURFACE: &str = "<num>";

#[derive(Debug, Clone, PartialEq)]
pub struct LexEntry {
    pub surface: Vec<String>,
    pub category: String,
    /// For the `<num>` entry this is `#n`, replaced by the literal token.
    pub semantics: Term,
    pub weight: f64,
}

impl LexEntry {
    pub fn is_number(&self) -> bool {
        self.surface.len() == 1 && self.surface[0] == NUMBER_SURFACE
    }

    /// Meaning of this entry when it covers `tokens`, if it does.
    pub fn instantiate(&self, tokens: &[String]) -> Option<Term> {
        if self.is_number() {
            let [tok] = tokens else { return None };
            let n = parse_number_token(tok)?;
            return Some(Term::int(n));
        }
        (self.surface == tokens).then(|| self.semantics.clone())
    }
}

/// Integer literal tokens: optional minus sign then digits.
pub fn parse_number_token(tok: &str) -> Option<num_bigint::BigInt> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplatePart {
    Word(String),
    /// 1-based child index.
    Slot(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrammarRule {
    pub lhs: String,
    pub rhs: Vec<String>,
    /// Mentions `#1` (and `#2` for binary rules) as typed variables.
    pub combinator: Term,
    pub weight: f64,
    pub template: Vec<TemplatePart>,
}

impl GrammarRule {
    /// Plugs child meanings into the combinator and beta-normalises.
    pub fn compose(&self, children: &[&Term]) -> Option<Term> {
        let mut t = self.combinator.clone();
        for (i, c) in children.iter().enumerate() {
            t = crate::lambda::substitute(&t, &placeholder(i + 1), c).ok()?;
        }
        crate::lambda::normalize(&t).ok()
    }
}

pub(crate) fn placeholder(i: usize) -> String {
    format!("#{i}")
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GrammarError {
    #[error("{file} line {line}: {msg}")]
    Syntax {
        file: &'static str,
        line: usize,
        msg: String,
    },
    #[error("{file} line {line}: `{entry}` does not type-check: {msg}")]
    Type {
        file: &'static str,
        line: usize,
        entry: String,
        msg: String,
    },
    #[error("no lexical entries")]
    NoLexicalEntries,
    #[error("category {category} has conflicting types {first} and {second}")]
    CategoryType {
        category: String,
        first: Type,
        second: Type,
    },
    #[error("category {0} is never produced by the lexicon or a typed rule")]
    UntypedCategory(String),
    #[error("unary rules form a cycle through {0}")]
    UnaryCycle(String),
}

/// A validated weighted grammar. Immutable once loaded.
#[derive(Debug, Clone)]
pub struct Grammar {
    pub lexicon: Vec<LexEntry>,
    pub rules: Vec<GrammarRule>,
    pub signature: Signature,
    categories: BTreeMap<String, Type>,
    /// Unary rule indices in an order where a rule producing `A` from `B`
    /// comes after every rule producing `B`.
    unary_order: Vec<usize>,
    binary: Vec<usize>,
}

const LEXICON: &str = "lexicon";
const RULES: &str = "rules";

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then_some((i + 1, l))
    })
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split('|').map(str::trim).collect()
}

fn parse_weight(s: &str, file: &'static str, line: usize) -> Result<f64, GrammarError> {
    match s.parse::<f64>() {
        Ok(w) if w.is_finite() => Ok(w),
        _ => Err(GrammarError::Syntax {
            file,
            line,
            msg: format!("bad weight `{s}`"),
        }),
    }
}

fn is_category(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

/// Loads and validates a lexicon and rule set.
pub fn load_grammar(lexicon_text: &str, rules_text: &str) -> Result<Grammar, GrammarError> {
    let mut sig = Signature::new();
    // Declarations first so entries may use constants declared later.
    for (line, l) in content_lines(lexicon_text) {
        let Some(decl) = l.strip_prefix("const ") else { continue };
        let syntax = |msg: String| GrammarError::Syntax {
            file: LEXICON,
            line,
            msg,
        };
        let (name, ty) = decl
            .split_once(':')
            .ok_or_else(|| syntax("expected `const name : Type`".into()))?;
        let ty = parse_type(ty.trim()).map_err(|e| syntax(e.to_string()))?;
        sig.declare(name.trim(), ty)
            .map_err(|e| syntax(e.to_string()))?;
    }

    let mut lexicon = Vec::new();
    let mut categories: BTreeMap<String, Type> = BTreeMap::new();
    for (line, l) in content_lines(lexicon_text) {
        if l.starts_with("const ") {
            continue;
        }
        let syntax = |msg: &str| GrammarError::Syntax {
            file: LEXICON,
            line,
            msg: msg.to_string(),
        };
        let f = split_fields(l);
        if f.len() != 4 {
            return Err(syntax("expected `surface | CATEGORY | term | weight`"));
        }
        let surface: Vec<String> = f[0].split_whitespace().map(str::to_lowercase).collect();
        if surface.is_empty() {
            return Err(syntax("empty surface"));
        }
        if !is_category(f[1]) {
            return Err(syntax("category must be upper-case"));
        }
        let weight = parse_weight(f[3], LEXICON, line)?;
        let type_err = |msg: String| GrammarError::Type {
            file: LEXICON,
            line,
            entry: f[0].to_string(),
            msg,
        };
        let (semantics, ty) = if f[0] == NUMBER_SURFACE {
            if f[2] != NUMBER_SURFACE {
                return Err(syntax("the <num> entry must have term <num>"));
            }
            (Term::var("#n", Type::Num), Type::Num)
        } else {
            let t = parse_term_with(f[2], &sig, &ParseOptions::default())
                .map_err(|e| type_err(e.to_string()))?;
            let ty = typecheck(&t, &sig).map_err(|e| type_err(e.to_string()))?;
            let t = crate::lambda::normalize(&t).map_err(|e| type_err(e.to_string()))?;
            (t, ty)
        };
        assign_type(&mut categories, f[1], ty)?;
        lexicon.push(LexEntry {
            surface,
            category: f[1].to_string(),
            semantics,
            weight,
        });
    }
    if lexicon.is_empty() {
        return Err(GrammarError::NoLexicalEntries);
    }

    struct RawRule<'a> {
        line: usize,
        lhs: String,
        rhs: Vec<String>,
        comb: &'a str,
        weight: f64,
        template: Vec<TemplatePart>,
    }
    let mut raw = Vec::new();
    for (line, l) in content_lines(rules_text) {
        let syntax = |msg: String| GrammarError::Syntax {
            file: RULES,
            line,
            msg,
        };
        let f = split_fields(l);
        if !(3..=4).contains(&f.len()) {
            return Err(syntax(
                "expected `LHS -> RHS1 [RHS2] | combinator | weight [| template]`".into(),
            ));
        }
        let (lhs, rhs) = f[0]
            .split_once("->")
            .ok_or_else(|| syntax("missing `->`".into()))?;
        let lhs = lhs.trim().to_string();
        let rhs: Vec<String> = rhs.split_whitespace().map(str::to_string).collect();
        if !is_category(&lhs) || rhs.iter().any(|c| !is_category(c)) {
            return Err(syntax("categories must be upper-case".into()));
        }
        if !(1..=2).contains(&rhs.len()) {
            return Err(syntax(format!("{} right-hand symbols; expected 1 or 2", rhs.len())));
        }
        let weight = parse_weight(f[2], RULES, line)?;
        let template = match f.get(3) {
            Some(t) => parse_template(t, rhs.len()).map_err(syntax)?,
            None => (1..=rhs.len()).map(TemplatePart::Slot).collect(),
        };
        // Arity: the combinator must use exactly the placeholders #1..#|rhs|.
        for i in 1..=9 {
            let used = mentions_placeholder(f[1], i);
            if used && i > rhs.len() {
                return Err(syntax(format!(
                    "combinator uses #{i} but the rule has {} right-hand symbol(s)",
                    rhs.len()
                )));
            }
            if !used && i <= rhs.len() {
                return Err(syntax(format!("combinator never uses #{i}")));
            }
        }
        raw.push(RawRule {
            line,
            lhs,
            rhs,
            comb: f[1],
            weight,
            template,
        });
    }

    // Type categories to a fixpoint: a rule can be checked once all of its
    // children have known types.
    let mut rules: Vec<Option<GrammarRule>> = vec![None; raw.len()];
    loop {
        let mut progress = false;
        for (i, r) in raw.iter().enumerate() {
            if rules[i].is_some() {
                continue;
            }
            let Some(child_types) = r
                .rhs
                .iter()
                .map(|c| categories.get(c).cloned())
                .collect::<Option<Vec<Type>>>()
            else {
                continue;
            };
            let type_err = |msg: String| GrammarError::Type {
                file: RULES,
                line: r.line,
                entry: r.comb.to_string(),
                msg,
            };
            let opts = ParseOptions {
                placeholders: child_types
                    .iter()
                    .enumerate()
                    .map(|(j, t)| (placeholder(j + 1), t.clone()))
                    .collect(),
                allow_free: false,
            };
            let comb = parse_term_with(r.comb, &sig, &opts).map_err(|e| type_err(e.to_string()))?;
            // Placeholders are free in the combinator; abstract them to check.
            let closed = child_types.iter().enumerate().rev().fold(comb.clone(), |acc, (j, t)| {
                Term::abs(placeholder(j + 1), t.clone(), acc)
            });
            let full = typecheck(&closed, &sig).map_err(|e| type_err(e.to_string()))?;
            let mut ty = &full;
            for _ in 0..child_types.len() {
                if let Type::Arrow(_, b) = ty {
                    ty = b;
                }
            }
            let ty = ty.clone();
            assign_type(&mut categories, &r.lhs, ty)?;
            rules[i] = Some(GrammarRule {
                lhs: r.lhs.clone(),
                rhs: r.rhs.clone(),
                combinator: comb,
                weight: r.weight,
                template: r.template.clone(),
            });
            progress = true;
        }
        if !progress {
            break;
        }
    }
    if let Some(r) = raw.iter().zip(&rules).find(|(_, done)| done.is_none()) {
        let missing = r
            .0
            .rhs
            .iter()
            .find(|c| !categories.contains_key(*c))
            .cloned()
            .unwrap_or_else(|| r.0.lhs.clone());
        return Err(GrammarError::UntypedCategory(missing));
    }
    let rules: Vec<GrammarRule> = rules.into_iter().map(Option::unwrap).collect();
    let unary_order = unary_topological_order(&rules)?;
    let binary = (0..rules.len()).filter(|&i| rules[i].rhs.len() == 2).collect();
    Ok(Grammar {
        lexicon,
        rules,
        signature: sig,
        categories,
        unary_order,
        binary,
    })
}

fn mentions_placeholder(src: &str, i: usize) -> bool {
    let pat = format!("#{i}");
    src.match_indices(&pat).any(|(at, _)| {
        !src[at + pat.len()..]
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_digit())
    })
}

fn parse_template(src: &str, arity: usize) -> Result<Vec<TemplatePart>, String> {
    let mut out = Vec::new();
    for w in src.split_whitespace() {
        if let Some(n) = w.strip_prefix('#') {
            let i: usize = n.parse().map_err(|_| format!("bad template slot `{w}`"))?;
            if i == 0 || i > arity {
                return Err(format!("template slot {w} exceeds rule arity {arity}"));
            }
            out.push(TemplatePart::Slot(i));
        } else {
            out.push(TemplatePart::Word(w.to_lowercase()));
        }
    }
    if out.is_empty() {
        return Err("empty template".into());
    }
    Ok(out)
}

fn assign_type(
    categories: &mut BTreeMap<String, Type>,
    cat: &str,
    ty: Type,
) -> Result<(), GrammarError> {
    match categories.get(cat) {
        Some(t) if *t != ty => Err(GrammarError::CategoryType {
            category: cat.to_string(),
            first: t.clone(),
            second: ty,
        }),
        Some(_) => Ok(()),
        None => {
            categories.insert(cat.to_string(), ty);
            Ok(())
        }
    }
}

fn unary_topological_order(rules: &[GrammarRule]) -> Result<Vec<usize>, GrammarError> {
    // Edges child -> parent over unary rules; Kahn's algorithm by category.
    let unary: Vec<usize> = (0..rules.len()).filter(|&i| rules[i].rhs.len() == 1).collect();
    let mut indeg: BTreeMap<&str, usize> = BTreeMap::new();
    let mut out_edges: HashMap<&str, Vec<usize>> = HashMap::new();
    for &i in &unary {
        let r = &rules[i];
        *indeg.entry(&r.lhs).or_default() += 1;
        indeg.entry(&r.rhs[0]).or_default();
        out_edges.entry(&r.rhs[0]).or_default().push(i);
    }
    let mut ready: BTreeSet<&str> = indeg
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(c, _)| *c)
        .collect();
    let mut order = Vec::new();
    while let Some(c) = ready.pop_first() {
        for &i in out_edges.get(c).map(Vec::as_slice).unwrap_or(&[]) {
            order.push(i);
            let d = indeg.get_mut(rules[i].lhs.as_str()).expect("known");
            *d -= 1;
            if *d == 0 {
                ready.insert(&rules[i].lhs);
            }
        }
    }
    if order.len() != unary.len() {
        let stuck = indeg
            .iter()
            .find(|(_, d)| **d > 0)
            .map(|(c, _)| c.to_string())
            .unwrap_or_default();
        return Err(GrammarError::UnaryCycle(stuck));
    }
    Ok(order)
}

impl Grammar {
    /// The grammar shipped with the crate.
    pub fn builtin() -> Grammar {
        load_grammar(BUILTIN_LEXICON, BUILTIN_RULES).expect("shipped grammar is valid")
    }

    pub fn category_type(&self, cat: &str) -> Option<&Type> {
        self.categories.get(cat)
    }

    pub fn categories(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.categories.iter().map(|(c, t)| (c.as_str(), t))
    }

    pub(crate) fn unary_rules(&self) -> &[usize] {
        &self.unary_order
    }

    pub(crate) fn binary_rules(&self) -> &[usize] {
        &self.binary
    }

    /// Whether some lexical entry could cover `tok`.
    pub fn knows_token(&self, tok: &str) -> bool {
        self.lexicon.iter().any(|e| {
            if e.is_number() {
                parse_number_token(tok).is_some()
            } else {
                e.surface.iter().any(|w| w == tok)
            }
        })
    }
}

pub const BUILTIN_LEXICON: &str = include_str!("../../data/grammar/lexicon.txt");
pub const BUILTIN_RULES: &str = include_str!("../../data/grammar/rules.txt");

impl fmt::Display for TemplatePart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplatePart::Word(w) => write!(f, "{w}"),
            TemplatePart::Slot(i) => write!(f, "#{i}"),
        }
    }
}
