use super::chart::{ranks_before, tokenize, ParseError, ParseResult};
use super::form::SpecForm;
use super::grammar::Grammar;

/// Start category for declarative sentences.
pub const DECLARATIVE: &str = "S";
/// Start category for commands.
pub const IMPERATIVE: &str = "IMP";
pub const DEFAULT_K: usize = 5;

const IF: &str = "IF:";
const THEN: &str = "THEN:";
const THEN_AFTER: &str = "THEN AFTER:";

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSpec {
    pub form: SpecForm,
    pub score: f64,
    /// Segment parses in marker order.
    pub parts: Vec<ParseResult>,
}

impl ScoredSpec {
    /// Tie-break key: the segment derivations joined.
    pub fn serial(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.serial.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("in \"{segment}\": {error}")]
    NoParse { segment: String, error: ParseError },
    #[error("malformed markers: {0}")]
    MalformedMarkers(String),
}

#[derive(Debug, PartialEq)]
enum Shape<'a> {
    Plain(&'a str),
    Conditional(&'a str, &'a str),
    PrePost(&'a str, &'a str),
}

fn split_markers(line: &str) -> Result<Shape<'_>, SpecError> {
    let bad = |m: &str| Err(SpecError::MalformedMarkers(m.to_string()));
    let ifs = line.matches(IF).count();
    let afters = line.matches(THEN_AFTER).count();
    let thens = line.matches(THEN).count();
    if ifs == 0 && afters == 0 && thens == 0 {
        return Ok(Shape::Plain(line));
    }
    if ifs != 1 {
        return if ifs == 0 {
            bad("THEN: or THEN AFTER: without IF:")
        } else {
            bad("more than one IF:")
        };
    }
    let Some(rest) = line.trim_start().strip_prefix(IF) else {
        return bad("IF: must start the specification");
    };
    let (cond, body, after) = match (thens, afters) {
        (1, 0) => {
            let (c, b) = rest.split_once(THEN).expect("counted");
            (c, b, false)
        }
        (0, 1) => {
            let (c, b) = rest.split_once(THEN_AFTER).expect("counted");
            (c, b, true)
        }
        (0, 0) => return bad("IF: without THEN: or THEN AFTER:"),
        _ => return bad("more than one THEN marker"),
    };
    if cond.trim().is_empty() || body.trim().is_empty() {
        return bad("empty segment");
    }
    Ok(if after {
        Shape::PrePost(cond, body)
    } else {
        Shape::Conditional(cond, body)
    })
}

impl Grammar {
    fn segment(&self, text: &str, start: &str, k: usize) -> Result<Vec<ParseResult>, SpecError> {
        self.parse(&tokenize(text), start, k)
            .map_err(|error| SpecError::NoParse {
                segment: text.trim().to_string(),
                error,
            })
    }

    /// Classifies a specification line by its markers and parses each
    /// segment, returning the `k` best combined readings.
    pub fn parse_spec(&self, line: &str, k: usize) -> Result<Vec<ScoredSpec>, SpecError> {
        let k = k.max(1);
        let mut out: Vec<ScoredSpec> = Vec::new();
        match split_markers(line)? {
            Shape::Plain(text) => {
                let decl = self.segment(text, DECLARATIVE, k);
                let imp = self.segment(text, IMPERATIVE, k);
                if let (Err(a), Err(b)) = (&decl, &imp) {
                    return Err(pick_error(a.clone(), b.clone()));
                }
                for p in decl.unwrap_or_default() {
                    out.push(ScoredSpec {
                        form: SpecForm::Invariant(p.logical_form.clone()),
                        score: p.score,
                        parts: vec![p],
                    });
                }
                for p in imp.unwrap_or_default() {
                    out.push(ScoredSpec {
                        form: SpecForm::Imperative(p.logical_form.clone()),
                        score: p.score,
                        parts: vec![p],
                    });
                }
            }
            Shape::Conditional(c, b) => {
                let cs = self.segment(c, DECLARATIVE, k)?;
                let bs = self.segment(b, IMPERATIVE, k)?;
                for e in &cs {
                    for l in &bs {
                        out.push(ScoredSpec {
                            form: SpecForm::ConditionalImperative {
                                cond: e.logical_form.clone(),
                                lf: l.logical_form.clone(),
                            },
                            score: e.score + l.score,
                            parts: vec![e.clone(), l.clone()],
                        });
                    }
                }
            }
            Shape::PrePost(c, b) => {
                let cs = self.segment(c, DECLARATIVE, k)?;
                let bs = self.segment(b, DECLARATIVE, k)?;
                for l in &cs {
                    for l2 in &bs {
                        out.push(ScoredSpec {
                            form: SpecForm::PrePost {
                                pre: l.logical_form.clone(),
                                post: l2.logical_form.clone(),
                            },
                            score: l.score + l2.score,
                            parts: vec![l.clone(), l2.clone()],
                        });
                    }
                }
            }
        }
        let mut keyed: Vec<(String, ScoredSpec)> = out.into_iter().map(|s| (s.serial(), s)).collect();
        keyed.sort_by(|(sa, a), (sb, b)| {
            if ranks_before(a.score, sa, b.score, sb) {
                std::cmp::Ordering::Less
            } else if ranks_before(b.score, sb, a.score, sa) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        keyed.truncate(k);
        Ok(keyed.into_iter().map(|(_, s)| s).collect())
    }
}

/// Reports whichever failed reading got further.
fn pick_error(a: SpecError, b: SpecError) -> SpecError {
    let reach = |e: &SpecError| match e {
        SpecError::NoParse {
            error: ParseError::NoParse { longest, .. },
            ..
        } => longest.as_ref().map_or(0, |s| s.end - s.start),
        _ => 0,
    };
    if reach(&b) > reach(&a) {
        b
    } else {
        a
    }
}

/// One line of a spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecLine {
    pub name: String,
    pub text: String,
    pub line: usize,
}

/// Reads a spec file: one specification per line with an optional leading
/// `name:` label. Blank lines and `#` comments are skipped.
pub fn parse_spec_file(text: &str) -> Vec<SpecLine> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (name, body) = match l.split_once(':') {
            Some((label, rest))
                if !label.is_empty()
                    && label != "IF"
                    && label != "THEN"
                    && label
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') =>
            {
                (label.to_string(), rest.trim())
            }
            _ => (format!("line{}", i + 1), l),
        };
        out.push(SpecLine {
            name,
            text: body.to_string(),
            line: i + 1,
        });
    }
    out
}
