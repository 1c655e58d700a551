use sha2::{Digest, Sha256};

use super::KnowledgeBase;
use crate::hoare::{load_relation, project_invariant, relation_formula, LfplRelation, Provenance};
use crate::imp::Stmt;
use crate::lambda::{alpha_eq, parse_closed_term, Signature};
use crate::semparse::SpecForm;

/// Content digest of a program: SHA-256 over its canonical printing.
pub fn program_digest(program: &Stmt) -> String {
    hex::encode(Sha256::digest(program.to_string().as_bytes()))
}

/// A finished verification run that later specifications may reuse.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofRecord {
    pub spec: SpecForm,
    pub relation: LfplRelation,
    pub program_digest: String,
    /// `(provenance, verdict name)` per VC.
    pub verdicts: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecordError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("record is missing `{0}`")]
    Missing(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    #[error("the stored proof is for a different program")]
    ProgramMismatch,
    #[error("the stored proof has VCs that are not Valid")]
    NotProved,
}

const HEADER: &str = "nhl-proof-record 1";

impl ProofRecord {
    pub fn new(
        spec: SpecForm,
        relation: LfplRelation,
        program: &Stmt,
        verdicts: impl IntoIterator<Item = (Provenance, String)>,
    ) -> Self {
        ProofRecord {
            spec,
            relation,
            program_digest: program_digest(program),
            verdicts: verdicts
                .into_iter()
                .map(|(p, v)| (p.to_string(), v))
                .collect(),
        }
    }

    pub fn is_fully_valid(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|(_, v)| v == "Valid")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{HEADER}\nform: {}\n", self.spec.kind());
        for t in self.spec.terms() {
            s.push_str(&format!("lf: {t}\n"));
        }
        for b in &self.relation.bindings {
            s.push_str(&format!("relation: {} = {}\n", b.body, b.program_var));
        }
        s.push_str(&format!("program-digest: {}\n", self.program_digest));
        for (p, v) in &self.verdicts {
            s.push_str(&format!("vc: {p}\t{v}\n"));
        }
        s
    }

    pub fn from_text(text: &str, sig: &Signature) -> Result<Self, RecordError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == HEADER => {}
            _ => {
                return Err(RecordError::Malformed {
                    line: 1,
                    msg: format!("expected `{HEADER}`"),
                })
            }
        }
        let (mut form, mut lfs, mut rel, mut digest, mut verdicts) =
            (None, Vec::new(), String::new(), None, Vec::new());
        for (i, raw) in lines {
            let line = i + 1;
            let bad = |msg: String| RecordError::Malformed { line, msg };
            if raw.trim().is_empty() {
                continue;
            }
            let Some((key, val)) = raw.split_once(": ") else {
                return Err(bad("expected `key: value`".into()));
            };
            match key {
                "form" => form = Some(val.trim().to_string()),
                "lf" => lfs.push(parse_closed_term(val, sig).map_err(|e| bad(e.to_string()))?),
                "relation" => {
                    rel.push_str(val);
                    rel.push('\n');
                }
                "program-digest" => digest = Some(val.trim().to_string()),
                "vc" => {
                    let Some((p, v)) = val.split_once('\t') else {
                        return Err(bad("expected `vc: <provenance>\\t<verdict>`".into()));
                    };
                    verdicts.push((p.to_string(), v.trim().to_string()));
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        let form = form.ok_or(RecordError::Missing("form"))?;
        let spec = SpecForm::from_parts(&form, lfs).ok_or(RecordError::Malformed {
            line: 2,
            msg: format!("wrong number of logical forms for `{form}`"),
        })?;
        let relation = load_relation(&rel, sig).map_err(|e| RecordError::Malformed {
            line: 0,
            msg: e.to_string(),
        })?;
        Ok(ProofRecord {
            spec,
            relation,
            program_digest: digest.ok_or(RecordError::Missing("program-digest"))?,
            verdicts,
        })
    }
}

/// Decides whether a stored proof already covers `new_spec` under
/// `new_relation`, modulo the knowledge base, without discharging anything.
pub fn transfer(
    proved: &ProofRecord,
    kb: &KnowledgeBase,
    new_spec: &SpecForm,
    new_relation: &LfplRelation,
    program_digest: &str,
) -> Result<bool, TransferError> {
    if proved.program_digest != program_digest {
        return Err(TransferError::ProgramMismatch);
    }
    if !proved.is_fully_valid() {
        return Err(TransferError::NotProved);
    }
    if proved.spec.kind() != new_spec.kind() {
        return Ok(false);
    }
    let same_forms = proved
        .spec
        .terms()
        .iter()
        .zip(new_spec.terms())
        .all(|(a, b)| alpha_eq(&kb.normalize(a), &kb.normalize(b)));
    if !same_forms {
        return Ok(false);
    }
    let rel = |r: &LfplRelation| kb.normalize(&relation_formula(r));
    if !alpha_eq(&rel(&proved.relation), &rel(new_relation)) {
        return Ok(false);
    }
    // The projected invariant must still be free of logical-form symbols
    // under the new names.
    if let SpecForm::Invariant(l) = new_spec {
        if project_invariant(l, new_relation).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::parse_program;
    use crate::lambda::{Term, Type};

    fn sig() -> Signature {
        let mut s = Signature::new();
        for f in ["balance", "valueof"] {
            s.declare(f, Type::arrow(Type::Entity, Type::Num)).unwrap();
        }
        s
    }

    fn lf(src: &str) -> Term {
        parse_closed_term(src, &sig()).unwrap()
    }

    fn record(spec: &str, rel: &str, verdict: &str) -> (ProofRecord, Stmt) {
        let p = parse_program("_balance := _balance + 1").unwrap();
        let r = ProofRecord::new(
            SpecForm::Invariant(lf(spec)),
            load_relation(rel, &sig()).unwrap(),
            &p,
            [(Provenance::Main, verdict.to_string())],
        );
        (r, p)
    }

    #[test]
    fn text_round_trip() {
        let (r, _) = record("forall x. balance(x) > 0", "balance(x) = _balance", "Valid");
        let text = r.to_text();
        assert!(text.starts_with("nhl-proof-record 1\nform: invariant\n"));
        assert_eq!(ProofRecord::from_text(&text, &sig()).unwrap(), r);
    }

    #[test]
    fn malformed_records() {
        let s = sig();
        assert!(matches!(ProofRecord::from_text("hello", &s), Err(RecordError::Malformed { line: 1, .. })));
        let no_digest = "nhl-proof-record 1\nform: invariant\nlf: forall x. balance(x) > 0\n";
        assert_eq!(ProofRecord::from_text(no_digest, &s), Err(RecordError::Missing("program-digest")));
        let bad_key = "nhl-proof-record 1\ncolour: blue\n";
        assert!(matches!(ProofRecord::from_text(bad_key, &s), Err(RecordError::Malformed { line: 2, .. })));
    }

    #[test]
    fn digest_ignores_layout() {
        let a = parse_program("_x := 1; _y := _x").unwrap();
        let b = parse_program("_x := 1;\n\n   _y := _x\n").unwrap();
        assert_eq!(program_digest(&a), program_digest(&b));
        assert_eq!(program_digest(&a).len(), 64);
        assert_ne!(program_digest(&a), program_digest(&parse_program("_x := 2; _y := _x").unwrap()));
    }

    #[test]
    fn transfer_modulo_equal_functions() {
        let (proved, p) = record("forall x. balance(x) > 0", "balance(x) = _balance", "Valid");
        let d = program_digest(&p);
        let kb = crate::kb::load_kb("equal balance valueof", &sig()).unwrap();
        let spec = SpecForm::Invariant(lf("forall x. valueof(x) > 0"));
        let rel = load_relation("valueof(x) = _balance", &sig()).unwrap();
        assert_eq!(transfer(&proved, &kb, &spec, &rel, &d), Ok(true));
        // Without the knowledge base the names differ.
        assert_eq!(transfer(&proved, &KnowledgeBase::default(), &spec, &rel, &d), Ok(false));
        let other = SpecForm::Invariant(lf("forall x. valueof(x) >= 0"));
        assert_eq!(transfer(&proved, &kb, &other, &rel, &d), Ok(false));
        assert_eq!(transfer(&proved, &kb, &spec, &rel, "00"), Err(TransferError::ProgramMismatch));

        let (failed, _) = record("forall x. balance(x) > 0", "balance(x) = _balance", "Invalid");
        assert_eq!(transfer(&failed, &kb, &spec, &rel, &d), Err(TransferError::NotProved));
    }
}
