use std::fmt;

use crate::lambda::{EvalError, Structure, Term};

/// A finite countermodel. `assignments` is the human-readable part: program
/// variables first, then abstracted terms, all as `name=value`.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub assignments: Vec<(String, String)>,
    pub structure: Structure,
}

impl Model {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.assignments
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    /// Evaluates a closed formula in the model's structure.
    pub fn satisfies(&self, formula: &Term) -> Result<bool, EvalError> {
        self.structure.eval_bool(formula)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.assignments.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Valid,
    Invalid(Model),
    Unknown(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Valid => "Valid",
            Verdict::Invalid(_) => "Invalid",
            Verdict::Unknown(_) => "Unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => write!(f, "Valid"),
            Verdict::Invalid(m) => write!(f, "Invalid({m})"),
            Verdict::Unknown(r) => write!(f, "Unknown({r})"),
        }
    }
}
