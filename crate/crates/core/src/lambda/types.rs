use std::collections::BTreeMap;
use std::fmt;

/// Simple types over the three base sorts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Entity,
    Num,
    Bool,
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::Arrow(Box::new(domain), Box::new(codomain))
    }

    /// Builds `a1 -> a2 -> ... -> result`.
    pub fn curried<I: IntoIterator<Item = Type>>(args: I, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| Type::arrow(arg, acc))
    }

    pub fn is_base(&self) -> bool {
        !matches!(self, Type::Arrow(..))
    }

    /// Splits an arrow into argument types and final result.
    pub fn uncurry(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Type::Arrow(d, c) = cur {
            args.push(d.as_ref());
            cur = c.as_ref();
        }
        (args, cur)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Entity => write!(f, "Entity"),
            Type::Num => write!(f, "Num"),
            Type::Bool => write!(f, "Bool"),
            Type::Arrow(d, c) => {
                if d.is_base() {
                    write!(f, "{} -> {}", d, c)
                } else {
                    write!(f, "({}) -> {}", d, c)
                }
            }
        }
    }
}

/// Names of the logical and arithmetic constants every signature carries.
pub mod builtin {
    pub const FORALL: &str = "forall";
    pub const EXISTS: &str = "exists";
    pub const AND: &str = "and";
    pub const OR: &str = "or";
    pub const IMPLIES: &str = "implies";
    pub const NOT: &str = "not";
    pub const EQ: &str = "eq";
    pub const GT: &str = "gt";
    pub const LT: &str = "lt";
    pub const GE: &str = "ge";
    pub const LE: &str = "le";
    pub const PLUS: &str = "plus";
    pub const MINUS: &str = "minus";
    pub const TIMES: &str = "times";
    pub const POST: &str = "post";
    pub const TRUE: &str = "true";
    pub const FALSE: &str = "false";

    pub const ARITH: [&str; 3] = [PLUS, MINUS, TIMES];
    pub const COMPARISONS: [&str; 5] = [EQ, GT, LT, GE, LE];
    pub const CONNECTIVES: [&str; 4] = [AND, OR, IMPLIES, NOT];
}

/// Map from constant name to its type.
///
/// Numeric literals, `true`/`false`, and underscore-prefixed program
/// variables are typed structurally and never stored here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    consts: BTreeMap<String, Type>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    /// A signature seeded with the logical, arithmetic and `post` constants.
    pub fn new() -> Self {
        use builtin::*;
        let pred = Type::arrow(Type::Entity, Type::Bool);
        let quant = Type::arrow(pred, Type::Bool);
        let bool2 = Type::curried([Type::Bool, Type::Bool], Type::Bool);
        let cmp = Type::curried([Type::Num, Type::Num], Type::Bool);
        let arith = Type::curried([Type::Num, Type::Num], Type::Num);

        let mut consts = BTreeMap::new();
        consts.insert(FORALL.to_string(), quant.clone());
        consts.insert(EXISTS.to_string(), quant);
        for c in [AND, OR, IMPLIES] {
            consts.insert(c.to_string(), bool2.clone());
        }
        consts.insert(NOT.to_string(), Type::arrow(Type::Bool, Type::Bool));
        for c in COMPARISONS {
            consts.insert(c.to_string(), cmp.clone());
        }
        for c in ARITH {
            consts.insert(c.to_string(), arith.clone());
        }
        consts.insert(POST.to_string(), Type::arrow(Type::Entity, Type::Entity));
        Signature { consts }
    }

    pub fn is_builtin(name: &str) -> bool {
        use builtin::*;
        matches!(
            name,
            FORALL
                | EXISTS
                | AND
                | OR
                | IMPLIES
                | NOT
                | EQ
                | GT
                | LT
                | GE
                | LE
                | PLUS
                | MINUS
                | TIMES
                | POST
                | TRUE
                | FALSE
        )
    }

    /// Declares a domain constant. Built-in names cannot be redeclared.
    pub fn declare(&mut self, name: &str, ty: Type) -> Result<(), SignatureError> {
        if Self::is_builtin(name) {
            return Err(SignatureError::Builtin(name.to_string()));
        }
        if is_program_var(name) || is_numeral(name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        match self.consts.get(name) {
            Some(existing) if *existing != ty => Err(SignatureError::Conflict {
                name: name.to_string(),
                existing: existing.clone(),
                new: ty,
            }),
            _ => {
                self.consts.insert(name.to_string(), ty);
                Ok(())
            }
        }
    }

    /// Type of a constant, including literal and program-variable constants.
    pub fn lookup(&self, name: &str) -> Option<Type> {
        if let Some(t) = self.consts.get(name) {
            return Some(t.clone());
        }
        if is_numeral(name) || is_program_var(name) {
            return Some(Type::Num);
        }
        if name == builtin::TRUE || name == builtin::FALSE {
            return Some(Type::Bool);
        }
        None
    }

    /// Domain (non-builtin) constants in name order.
    pub fn domain_consts(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.consts
            .iter()
            .filter(|(n, _)| !Self::is_builtin(n))
            .map(|(n, t)| (n.as_str(), t))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SignatureError {
    #[error("cannot redeclare built-in constant `{0}`")]
    Builtin(String),
    #[error("`{0}` is reserved for literals or program variables")]
    Reserved(String),
    #[error("constant `{name}` already declared as {existing}, not {new}")]
    Conflict { name: String, existing: Type, new: Type },
}

/// Program variables are spelled with a leading underscore.
pub fn is_program_var(name: &str) -> bool {
    name.len() > 1
        && name.starts_with('_')
        && name[1..]
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_numeral(name: &str) -> bool {
    let digits = name.strip_prefix('-').unwrap_or(name);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}
