use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::grammar::{Grammar, TemplatePart};
use crate::lambda::{canonical_key, Term};

/// Scores closer than this are ties, broken by derivation text.
pub const SCORE_EPS: f64 = 1e-9;

/// How a constituent was built.
#[derive(Debug, Clone, PartialEq)]
pub enum Derivation {
    Lex {
        entry: usize,
        tokens: Vec<String>,
    },
    Rule {
        rule: usize,
        children: Vec<Arc<Derivation>>,
    },
}

impl Derivation {
    /// `(CAT/lN words...)` for lexical leaves and `(LHS/rN children...)`
    /// for rule applications. Used for tie-breaking.
    pub fn serialize(&self, g: &Grammar) -> String {
        let mut out = String::new();
        self.write_serial(g, &mut out);
        out
    }

    fn write_serial(&self, g: &Grammar, out: &mut String) {
        match self {
            Derivation::Lex { entry, tokens } => {
                out.push_str(&format!("({}/l{entry}", g.lexicon[*entry].category));
                for t in tokens {
                    out.push(' ');
                    out.push_str(t);
                }
                out.push(')');
            }
            Derivation::Rule { rule, children } => {
                out.push_str(&format!("({}/r{rule}", g.rules[*rule].lhs));
                for c in children {
                    out.push(' ');
                    c.write_serial(g, out);
                }
                out.push(')');
            }
        }
    }

    pub fn category<'g>(&self, g: &'g Grammar) -> &'g str {
        match self {
            Derivation::Lex { entry, .. } => &g.lexicon[*entry].category,
            Derivation::Rule { rule, .. } => &g.rules[*rule].lhs,
        }
    }

    /// Sum of the weights used.
    pub fn score(&self, g: &Grammar) -> f64 {
        match self {
            Derivation::Lex { entry, .. } => g.lexicon[*entry].weight,
            Derivation::Rule { rule, children } => {
                g.rules[*rule].weight + children.iter().map(|c| c.score(g)).sum::<f64>()
            }
        }
    }

    /// Meaning composed bottom-up along the derivation.
    pub fn semantics(&self, g: &Grammar) -> Option<Term> {
        match self {
            Derivation::Lex { entry, tokens } => g.lexicon[*entry].instantiate(tokens),
            Derivation::Rule { rule, children } => {
                let sems = children
                    .iter()
                    .map(|c| c.semantics(g))
                    .collect::<Option<Vec<_>>>()?;
                g.rules[*rule].compose(&sems.iter().collect::<Vec<_>>())
            }
        }
    }

    /// Words produced by expanding rule templates.
    pub fn words(&self, g: &Grammar) -> Vec<String> {
        match self {
            Derivation::Lex { tokens, .. } => tokens.clone(),
            Derivation::Rule { rule, children } => {
                let mut out = Vec::new();
                for part in &g.rules[*rule].template {
                    match part {
                        TemplatePart::Word(w) => out.push(w.clone()),
                        TemplatePart::Slot(i) => out.extend(children[i - 1].words(g)),
                    }
                }
                out
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Derivation::Lex { .. } => 1,
            Derivation::Rule { children, .. } => {
                1 + children.iter().map(|c| c.depth()).max().unwrap_or(0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseResult {
    /// Beta-normal.
    pub logical_form: Term,
    pub score: f64,
    pub derivation: Arc<Derivation>,
    /// Serialized derivation, the tie-break key.
    pub serial: String,
}

/// A maximal constituent found when no full parse exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub category: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("{}", no_parse_message(.unknown, .longest))]
    NoParse {
        unknown: Vec<String>,
        longest: Option<Span>,
    },
}

fn no_parse_message(unknown: &[String], longest: &Option<Span>) -> String {
    let mut msg = "no parse".to_string();
    if !unknown.is_empty() {
        msg.push_str(&format!("; unknown words: {}", unknown.join(", ")));
    }
    if let Some(s) = longest {
        msg.push_str(&format!(
            "; longest constituent: \"{}\" ({}, tokens {}..{})",
            s.text, s.category, s.start, s.end
        ));
    }
    msg
}

/// Lowercases, splits on whitespace and strips trailing punctuation.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|w| {
            w.trim_end_matches(|c: char| ".,;:!?".contains(c))
                .to_lowercase()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

#[derive(Clone)]
pub(crate) struct Item {
    pub sem: Term,
    pub key: String,
    pub score: f64,
    pub serial: String,
    pub deriv: Arc<Derivation>,
}

/// `a` ranks before `b`: higher score, then smaller serialization.
pub(crate) fn ranks_before(a_score: f64, a_serial: &str, b_score: f64, b_serial: &str) -> bool {
    if (a_score - b_score).abs() > SCORE_EPS {
        a_score > b_score
    } else {
        a_serial < b_serial
    }
}

fn rank_cmp(a: &Item, b: &Item) -> std::cmp::Ordering {
    if ranks_before(a.score, &a.serial, b.score, &b.serial) {
        std::cmp::Ordering::Less
    } else if ranks_before(b.score, &b.serial, a.score, &a.serial) {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

/// Items of one chart cell, keyed by category then by logical form. Only
/// the best derivation per (category, meaning) is kept: composition depends
/// on meanings alone and scores add up, so a worse derivation of the same
/// meaning can never end up in a better full parse.
#[derive(Default)]
pub(crate) struct Cell {
    pub by_cat: HashMap<String, HashMap<String, Item>>,
}

impl Cell {
    pub fn add(&mut self, cat: &str, item: Item) -> bool {
        let slot = self.by_cat.entry(cat.to_string()).or_default();
        match slot.get(&item.key) {
            Some(old) if !ranks_before(item.score, &item.serial, old.score, &old.serial) => false,
            _ => {
                slot.insert(item.key.clone(), item);
                true
            }
        }
    }

    pub fn items(&self, cat: &str) -> Vec<&Item> {
        let mut v: Vec<&Item> = self
            .by_cat
            .get(cat)
            .map(|m| m.values().collect())
            .unwrap_or_default();
        v.sort_by(|a, b| rank_cmp(a, b));
        v
    }
}

impl Grammar {
    pub(crate) fn make_item(&self, deriv: Derivation, sem: Term, score: f64) -> Item {
        let serial = deriv.serialize(self);
        Item {
            key: canonical_key(&sem),
            sem,
            score,
            serial,
            deriv: Arc::new(deriv),
        }
    }

    /// Applies unary rules within a cell, children before parents.
    pub(crate) fn close_unary(&self, cell: &mut Cell) {
        for &ri in self.unary_rules() {
            let r = &self.rules[ri];
            let children: Vec<Item> = cell.items(&r.rhs[0]).into_iter().cloned().collect();
            for c in children {
                if let Some(sem) = r.compose(&[&c.sem]) {
                    let d = Derivation::Rule {
                        rule: ri,
                        children: vec![c.deriv.clone()],
                    };
                    let item = self.make_item(d, sem, r.weight + c.score);
                    cell.add(&r.lhs, item);
                }
            }
        }
    }

    fn chart(&self, tokens: &[String]) -> Vec<Vec<Cell>> {
        let n = tokens.len();
        let mut chart: Vec<Vec<Cell>> = (0..=n)
            .map(|_| (0..=n).map(|_| Cell::default()).collect())
            .collect();
        for len in 1..=n {
            for i in 0..=n - len {
                let j = i + len;
                let mut cell = Cell::default();
                for (ei, e) in self.lexicon.iter().enumerate() {
                    if let Some(sem) = e.instantiate(&tokens[i..j]) {
                        let d = Derivation::Lex {
                            entry: ei,
                            tokens: tokens[i..j].to_vec(),
                        };
                        cell.add(&e.category, self.make_item(d, sem, e.weight));
                    }
                }
                for m in i + 1..j {
                    for &ri in self.binary_rules() {
                        let r = &self.rules[ri];
                        let left = chart[i][m].items(&r.rhs[0]);
                        if left.is_empty() {
                            continue;
                        }
                        let right = chart[m][j].items(&r.rhs[1]);
                        for a in &left {
                            for b in &right {
                                let Some(sem) = r.compose(&[&a.sem, &b.sem]) else {
                                    continue;
                                };
                                let d = Derivation::Rule {
                                    rule: ri,
                                    children: vec![a.deriv.clone(), b.deriv.clone()],
                                };
                                let item = self.make_item(d, sem, r.weight + a.score + b.score);
                                cell.add(&r.lhs, item);
                            }
                        }
                    }
                }
                self.close_unary(&mut cell);
                chart[i][j] = cell;
            }
        }
        chart
    }

    /// Top-`k` readings of `tokens` as category `start`, one per distinct
    /// logical form, best first.
    pub fn parse(&self, tokens: &[String], start: &str, k: usize) -> Result<Vec<ParseResult>, ParseError> {
        let n = tokens.len();
        let chart = self.chart(tokens);
        let found: Vec<&Item> = if n == 0 { Vec::new() } else { chart[0][n].items(start) };
        if found.is_empty() {
            return Err(self.no_parse(tokens, &chart));
        }
        Ok(found
            .into_iter()
            .take(k.max(1))
            .map(|it| ParseResult {
                logical_form: it.sem.clone(),
                score: it.score,
                derivation: it.deriv.clone(),
                serial: it.serial.clone(),
            })
            .collect())
    }

    /// Tokenizes then parses.
    pub fn parse_sentence(&self, sentence: &str, start: &str, k: usize) -> Result<Vec<ParseResult>, ParseError> {
        self.parse(&tokenize(sentence), start, k)
    }

    fn no_parse(&self, tokens: &[String], chart: &[Vec<Cell>]) -> ParseError {
        let mut unknown: Vec<String> = Vec::new();
        for t in tokens {
            if !self.knows_token(t) && !unknown.contains(t) {
                unknown.push(t.clone());
            }
        }
        let n = tokens.len();
        let mut longest = None;
        'outer: for len in (1..=n).rev() {
            for i in 0..=n - len {
                let cell = &chart[i][i + len];
                let best = cell
                    .by_cat
                    .iter()
                    .flat_map(|(c, m)| m.values().map(move |it| (c, it)))
                    .min_by(|(ca, a), (cb, b)| rank_cmp(a, b).then_with(|| ca.cmp(cb)));
                if let Some((cat, _)) = best {
                    longest = Some(Span {
                        start: i,
                        end: i + len,
                        category: cat.clone(),
                        text: tokens[i..i + len].join(" "),
                    });
                    break 'outer;
                }
            }
        }
        ParseError::NoParse { unknown, longest }
    }
}

impl fmt::Display for ParseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3}\t{}", self.score, self.logical_form)
    }
}
