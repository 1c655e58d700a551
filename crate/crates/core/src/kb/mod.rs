//! Domain-knowledge axioms: function equalities and `isa` subsumption.

mod record;

use std::collections::BTreeMap;
use std::fmt;

use crate::discharge::{ground_entity_terms, join_implication, split_implication};
use crate::hoare::{Binding, LfplRelation};
use crate::lambda::{Signature, Term, Type};
use crate::semparse::SpecForm;

pub use record::{program_digest, transfer, ProofRecord, RecordError, TransferError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `forall x. f(x) = g(x)`
    FunEqual(String, String),
    /// `forall x. a(x) => b(x)`
    Isa(String, String),
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::FunEqual(a, b) => write!(f, "equal {a} {b}"),
            Axiom::Isa(a, b) => write!(f, "isa {a} {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KbError {
    #[error("line {line}: expected `equal f g` or `isa A B`")]
    Syntax { line: usize },
    #[error("line {line}: unknown function `{name}`")]
    Unknown { line: usize, name: String },
    #[error("line {line}: {msg}")]
    Type { line: usize, msg: String },
    #[error("line {line}: `{name}` is related to itself")]
    Degenerate { line: usize, name: String },
}

/// A validated axiom set. Each class of equal functions rewrites to its
/// alphabetically greatest member, so rewriting always terminates and never
/// depends on axiom order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub axioms: Vec<Axiom>,
    rewrite: BTreeMap<String, String>,
    types: BTreeMap<String, Type>,
}

fn find(parent: &mut BTreeMap<String, String>, x: &str) -> String {
    let mut cur = x.to_string();
    while let Some(p) = parent.get(&cur) {
        if *p == cur {
            break;
        }
        cur = p.clone();
    }
    cur
}

/// Parses `equal f g` / `isa A B` lines against the signature.
pub fn load_kb(text: &str, sig: &Signature) -> Result<KnowledgeBase, KbError> {
    let mut kb = KnowledgeBase::default();
    let mut parent: BTreeMap<String, String> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let src = raw.split('#').next().unwrap_or("").trim();
        if src.is_empty() {
            continue;
        }
        let words: Vec<&str> = src.split_whitespace().collect();
        let [kw, a, b] = words[..] else {
            return Err(KbError::Syntax { line });
        };
        if a == b {
            return Err(KbError::Degenerate {
                line,
                name: a.to_string(),
            });
        }
        let ty = |name: &str| match sig.lookup(name) {
            Some(t) if !Signature::is_builtin(name) => Ok(t),
            _ => Err(KbError::Unknown {
                line,
                name: name.to_string(),
            }),
        };
        let (ta, tb) = (ty(a)?, ty(b)?);
        match kw {
            "equal" => {
                let ok = ta == tb
                    && (ta == Type::arrow(Type::Entity, Type::Num)
                        || ta == Type::arrow(Type::Entity, Type::Bool));
                if !ok {
                    return Err(KbError::Type {
                        line,
                        msg: format!("`{a}: {ta}` and `{b}: {tb}` must share type Entity -> Num or Entity -> Bool"),
                    });
                }
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent.entry(a.to_string()).or_insert_with(|| a.to_string());
                parent.entry(b.to_string()).or_insert_with(|| b.to_string());
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent.insert(lo, hi);
                }
                kb.types.insert(a.to_string(), ta);
                kb.types.insert(b.to_string(), tb);
                kb.axioms.push(Axiom::FunEqual(a.to_string(), b.to_string()));
            }
            "isa" => {
                let pred = Type::arrow(Type::Entity, Type::Bool);
                if ta != pred || tb != pred {
                    return Err(KbError::Type {
                        line,
                        msg: format!("`{a}` and `{b}` must be predicates of type Entity -> Bool"),
                    });
                }
                kb.types.insert(a.to_string(), ta);
                kb.types.insert(b.to_string(), tb);
                kb.axioms.push(Axiom::Isa(a.to_string(), b.to_string()));
            }
            _ => return Err(KbError::Syntax { line }),
        }
    }
    let names: Vec<String> = parent.keys().cloned().collect();
    for n in names {
        let r = find(&mut parent, &n);
        if r != n {
            kb.rewrite.insert(n, r);
        }
    }
    Ok(kb)
}

impl KnowledgeBase {
    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// The function a name rewrites to.
    pub fn representative<'a>(&'a self, name: &'a str) -> &'a str {
        self.rewrite.get(name).map(String::as_str).unwrap_or(name)
    }

    /// Oriented rewrites `from -> to`, sorted by `from`.
    pub fn rewrites(&self) -> impl Iterator<Item = (&str, &str)> {
        self.rewrite.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// Applies only the function-equality rewrites.
    pub fn normalize(&self, t: &Term) -> Term {
        if self.rewrite.is_empty() {
            return t.clone();
        }
        match t {
            Term::Const(c, ty) => match self.rewrite.get(c) {
                Some(r) => Term::Const(r.clone(), ty.clone()),
                None => t.clone(),
            },
            Term::Var(..) => t.clone(),
            Term::Abs(x, ty, b) => Term::abs(x.clone(), ty.clone(), self.normalize(b)),
            Term::App(f, a) => Term::app(self.normalize(f), self.normalize(a)),
        }
    }

    /// The specification with equal functions renamed to representatives.
    pub fn normalize_spec(&self, spec: &SpecForm) -> SpecForm {
        spec.map_terms(|t| self.normalize(t))
    }

    pub fn normalize_relation(&self, r: &LfplRelation) -> LfplRelation {
        LfplRelation::new(
            r.bindings
                .iter()
                .map(|b| Binding {
                    body: self.normalize(&b.body),
                    program_var: b.program_var.clone(),
                })
                .collect(),
        )
    }

    fn isa_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for ax in &self.axioms {
            if let Axiom::Isa(a, b) = ax {
                let p = (
                    self.representative(a).to_string(),
                    self.representative(b).to_string(),
                );
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Every axiom as a closed formula.
    pub fn axiom_formulas(&self) -> Vec<Term> {
        let x = || Term::var("x", Type::Entity);
        self.axioms
            .iter()
            .map(|ax| match ax {
                Axiom::FunEqual(f, g) => {
                    let ty = self.types[f].clone();
                    let (fx, gx) = (
                        Term::app(Term::constant(f.clone(), ty.clone()), x()),
                        Term::app(Term::constant(g.clone(), ty.clone()), x()),
                    );
                    let body = if ty == Type::arrow(Type::Entity, Type::Num) {
                        Term::eq(fx, gx)
                    } else {
                        Term::and(Term::implies(fx.clone(), gx.clone()), Term::implies(gx, fx))
                    };
                    Term::forall("x", body)
                }
                Axiom::Isa(a, b) => {
                    let pred = Type::arrow(Type::Entity, Type::Bool);
                    Term::forall(
                        "x",
                        Term::implies(
                            Term::app(Term::constant(a.clone(), pred.clone()), x()),
                            Term::app(Term::constant(b.clone(), pred), x()),
                        ),
                    )
                }
            })
            .collect()
    }

    /// `axioms => formula`, for checking with an oracle that knows nothing
    /// about the knowledge base.
    pub fn as_hypothesis(&self, formula: &Term) -> Term {
        let ax = self.axiom_formulas();
        if ax.is_empty() {
            formula.clone()
        } else {
            Term::implies(Term::conj(ax), formula.clone())
        }
    }
}

/// Rewrites equal functions to their representative, then adds
/// `A(t) => B(t)` hypotheses for every `isa A B` and every ground entity
/// term `t` of the formula.
pub fn apply_kb(formula: &Term, kb: &KnowledgeBase) -> Term {
    let t = kb.normalize(formula);
    let isa = kb.isa_pairs();
    if isa.is_empty() {
        return t;
    }
    let grounds = ground_entity_terms(&t);
    let (mut hyps, goal) = split_implication(&t);
    let pred = Type::arrow(Type::Entity, Type::Bool);
    let mut added = false;
    for (a, b) in &isa {
        for g in &grounds {
            let inst = Term::implies(
                Term::app(Term::constant(a.clone(), pred.clone()), g.clone()),
                Term::app(Term::constant(b.clone(), pred.clone()), g.clone()),
            );
            if !hyps.contains(&inst) {
                hyps.push(inst);
                added = true;
            }
        }
    }
    if added {
        join_implication(hyps, goal)
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;

    fn sig() -> Signature {
        let mut s = Signature::new();
        for f in ["balance", "valueof", "amount"] {
            s.declare(f, Type::arrow(Type::Entity, Type::Num)).unwrap();
        }
        for p in ["savingsaccount", "account", "asset"] {
            s.declare(p, Type::arrow(Type::Entity, Type::Bool)).unwrap();
        }
        s.declare("c", Type::Entity).unwrap();
        s
    }

    fn t(src: &str) -> Term {
        parse_term(src, &sig()).unwrap()
    }

    #[test]
    fn load_examples() {
        let kb = load_kb("equal balance valueof", &sig()).unwrap();
        assert_eq!(kb.axioms, vec![Axiom::FunEqual("balance".into(), "valueof".into())]);
        let kb = load_kb("# taxonomy\nisa savingsaccount account\n", &sig()).unwrap();
        assert_eq!(kb.axioms, vec![Axiom::Isa("savingsaccount".into(), "account".into())]);
        assert!(matches!(load_kb("equal f f", &sig()), Err(KbError::Degenerate { .. })));
        assert!(matches!(load_kb("equal balance nosuch", &sig()), Err(KbError::Unknown { .. })));
        assert!(matches!(load_kb("equal balance account", &sig()), Err(KbError::Type { .. })));
        assert!(matches!(load_kb("same balance valueof", &sig()), Err(KbError::Syntax { line: 1 })));
    }

    #[test]
    fn classes_rewrite_to_greatest_member() {
        let kb = load_kb("equal valueof balance\nequal amount balance", &sig()).unwrap();
        assert_eq!(kb.representative("balance"), "valueof");
        assert_eq!(kb.representative("amount"), "valueof");
        assert_eq!(kb.representative("valueof"), "valueof");
    }

    #[test]
    fn apply_examples() {
        let kb = load_kb("equal balance valueof", &sig()).unwrap();
        assert_eq!(apply_kb(&t("balance(c) > 0"), &kb), t("valueof(c) > 0"));
        let plain = t("_x > 0");
        assert_eq!(apply_kb(&plain, &kb), plain);

        let kb = load_kb("isa savingsaccount account", &sig()).unwrap();
        let f = t("savingsaccount(c) => account(c)");
        let applied = apply_kb(&f, &kb);
        assert_eq!(
            applied,
            t("savingsaccount(c) && (savingsaccount(c) => account(c)) => account(c)")
        );
        assert_eq!(apply_kb(&applied, &kb), applied);
    }

    #[test]
    fn axioms_as_formulas() {
        let kb = load_kb("equal balance valueof\nisa savingsaccount account", &sig()).unwrap();
        let ax = kb.axiom_formulas();
        assert_eq!(ax[0], t("forall x. balance(x) = valueof(x)"));
        assert_eq!(ax[1], t("forall x. savingsaccount(x) => account(x)"));
    }
}
