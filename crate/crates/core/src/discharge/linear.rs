//! Validity of quantifier-free linear integer formulas: negate, split into
//! cubes, and refute each cube with Fourier-Motzkin over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lambda::{builtin, Term};

/// Cube budget for the case split of the negated formula.
pub const MAX_CUBES: usize = 20_000;
/// Constraint budget per Fourier-Motzkin run.
pub const MAX_CONSTRAINTS: usize = 4_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiaOutcome {
    /// The negation has no rational solution.
    Valid,
    /// Some cube of the negation is rationally satisfiable.
    NotProven,
    Unknown(String),
}

/// `sum coeffs*vars + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Lin<N> {
    coeffs: BTreeMap<String, N>,
    constant: N,
}

type ZLin = Lin<BigInt>;
type QLin = Lin<BigRational>;

impl ZLin {
    fn constant(c: BigInt) -> Self {
        Lin {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), BigInt::one());
        Lin {
            coeffs,
            constant: BigInt::zero(),
        }
    }

    fn add(mut self, other: &ZLin, sign: i32) -> ZLin {
        for (v, c) in &other.coeffs {
            let e = self.coeffs.entry(v.clone()).or_insert_with(BigInt::zero);
            *e += c * sign;
        }
        self.coeffs.retain(|_, c| !c.is_zero());
        self.constant += &other.constant * sign;
        self
    }

    fn scale(mut self, k: &BigInt) -> ZLin {
        if k.is_zero() {
            return ZLin::constant(BigInt::zero());
        }
        for c in self.coeffs.values_mut() {
            *c *= k;
        }
        self.constant *= k;
        self
    }

    fn to_q(&self) -> QLin {
        Lin {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), BigRational::from_integer(c.clone())))
                .collect(),
            constant: BigRational::from_integer(self.constant.clone()),
        }
    }
}

fn linearize(t: &Term) -> Result<ZLin, String> {
    if let Some(n) = t.as_int() {
        return Ok(ZLin::constant(n));
    }
    if let Some((op, a, b)) = t.as_binary() {
        match op {
            builtin::PLUS => return Ok(linearize(a)?.add(&linearize(b)?, 1)),
            builtin::MINUS => return Ok(linearize(a)?.add(&linearize(b)?, -1)),
            builtin::TIMES => {
                let (x, y) = (linearize(a)?, linearize(b)?);
                return if x.coeffs.is_empty() {
                    Ok(y.scale(&x.constant))
                } else if y.coeffs.is_empty() {
                    Ok(x.scale(&y.constant))
                } else {
                    Err(format!("nonlinear term `{t}`"))
                };
            }
            _ => {}
        }
    }
    match t {
        Term::Const(c, crate::lambda::Type::Num) => Ok(ZLin::var(c)),
        _ => Err(format!("not a linear term: `{t}`")),
    }
}

/// Literal of the negated formula.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Lit {
    /// `e >= 0`
    Ge(ZLin),
    /// `e = 0`
    Eq(ZLin),
    Prop(String, bool),
    False,
}

enum Nnf {
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Lit(Lit),
}

fn ge(e: ZLin) -> Nnf {
    Nnf::Lit(Lit::Ge(e))
}

/// `a op b` (or its negation) as a tightened integer constraint.
fn comparison(op: &str, a: &Term, b: &Term, pos: bool) -> Result<Nnf, String> {
    let (a, b) = (linearize(a)?, linearize(b)?);
    let one = ZLin::constant(BigInt::one());
    let diff = |x: &ZLin, y: &ZLin| x.clone().add(y, -1);
    // a > b  <=>  a - b - 1 >= 0 over the integers.
    let gt = |x: &ZLin, y: &ZLin| ge(diff(x, y).add(&one, -1));
    let geq = |x: &ZLin, y: &ZLin| ge(diff(x, y));
    Ok(match (op, pos) {
        (builtin::EQ, true) => Nnf::Lit(Lit::Eq(diff(&a, &b))),
        (builtin::EQ, false) => Nnf::Or(vec![gt(&a, &b), gt(&b, &a)]),
        (builtin::GT, true) | (builtin::LE, false) => gt(&a, &b),
        (builtin::LT, true) | (builtin::GE, false) => gt(&b, &a),
        (builtin::GE, true) | (builtin::LT, false) => geq(&a, &b),
        (builtin::LE, true) | (builtin::GT, false) => geq(&b, &a),
        _ => return Err(format!("unexpected comparison `{op}`")),
    })
}

fn nnf(t: &Term, pos: bool) -> Result<Nnf, String> {
    if let Some(b) = t.as_bool() {
        return Ok(if b == pos {
            Nnf::And(vec![])
        } else {
            Nnf::Lit(Lit::False)
        });
    }
    if let Some(a) = t.as_not() {
        return nnf(a, !pos);
    }
    if let Some((op, a, b)) = t.as_binary() {
        let both = |x: Nnf, y: Nnf, conj: bool| {
            if conj {
                Nnf::And(vec![x, y])
            } else {
                Nnf::Or(vec![x, y])
            }
        };
        match op {
            builtin::AND => return Ok(both(nnf(a, pos)?, nnf(b, pos)?, pos)),
            builtin::OR => return Ok(both(nnf(a, pos)?, nnf(b, pos)?, !pos)),
            builtin::IMPLIES => return Ok(both(nnf(a, !pos)?, nnf(b, pos)?, !pos)),
            _ if builtin::COMPARISONS.contains(&op) => return comparison(op, a, b, pos),
            _ => {}
        }
    }
    match t {
        Term::Const(c, crate::lambda::Type::Bool) => Ok(Nnf::Lit(Lit::Prop(c.clone(), pos))),
        _ => Err(format!("not a linear formula: `{t}`")),
    }
}

/// Decides validity of a quantifier-free formula over integer constants,
/// linear arithmetic and propositional constants.
pub fn lia_valid(formula: &Term) -> LiaOutcome {
    let neg = match nnf(formula, false) {
        Ok(n) => n,
        Err(e) => return LiaOutcome::Unknown(e),
    };
    let mut cubes = 0;
    match search(vec![&neg], &mut Vec::new(), &mut cubes) {
        Ok(true) => LiaOutcome::NotProven,
        Ok(false) => LiaOutcome::Valid,
        Err(e) => LiaOutcome::Unknown(e),
    }
}

/// Depth-first enumeration of the cubes of `todo`; true when one of them
/// is rationally satisfiable.
fn search<'a>(
    mut todo: Vec<&'a Nnf>,
    lits: &mut Vec<&'a Lit>,
    cubes: &mut usize,
) -> Result<bool, String> {
    let depth = lits.len();
    while let Some(item) = todo.pop() {
        match item {
            Nnf::And(xs) => todo.extend(xs.iter().rev()),
            Nnf::Lit(Lit::False) => {
                lits.truncate(depth);
                return Ok(false);
            }
            Nnf::Lit(l) => {
                if let Lit::Prop(p, s) = l {
                    if lits
                        .iter()
                        .any(|m| matches!(m, Lit::Prop(q, t) if q == p && t != s))
                    {
                        lits.truncate(depth);
                        return Ok(false);
                    }
                }
                lits.push(l);
            }
            Nnf::Or(xs) => {
                for x in xs {
                    let mut branch = todo.clone();
                    branch.push(x);
                    if search(branch, lits, cubes)? {
                        lits.truncate(depth);
                        return Ok(true);
                    }
                }
                lits.truncate(depth);
                return Ok(false);
            }
        }
    }
    *cubes += 1;
    if *cubes > MAX_CUBES {
        return Err(format!("more than {MAX_CUBES} cases"));
    }
    let r = cube_feasible(lits);
    lits.truncate(depth);
    r
}

fn content(e: &ZLin) -> BigInt {
    e.coeffs.values().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn cube_feasible(lits: &[&Lit]) -> Result<bool, String> {
    let mut eqs: Vec<QLin> = Vec::new();
    let mut ges: Vec<QLin> = Vec::new();
    for l in lits {
        match l {
            Lit::Ge(e) => {
                // Over the integers sum(a_i x_i) + c >= 0 implies
                // sum(a_i/g x_i) + floor(c/g) >= 0.
                let g = content(e);
                if g > BigInt::one() {
                    let mut t = e.clone();
                    for c in t.coeffs.values_mut() {
                        *c = &*c / &g;
                    }
                    t.constant = e.constant.div_floor(&g);
                    ges.push(t.to_q());
                } else {
                    ges.push(e.to_q());
                }
            }
            Lit::Eq(e) => {
                let g = content(e);
                if !g.is_zero() && !(&e.constant % &g).is_zero() {
                    return Ok(false);
                }
                eqs.push(e.to_q());
            }
            Lit::Prop(..) => {}
            Lit::False => return Ok(false),
        }
    }
    fourier_motzkin(eqs, ges)
}

fn substitute_var(e: &QLin, v: &str, by: &QLin) -> QLin {
    let Some(k) = e.coeffs.get(v).cloned() else {
        return e.clone();
    };
    let mut out = e.clone();
    out.coeffs.remove(v);
    for (w, c) in &by.coeffs {
        let x = out.coeffs.entry(w.clone()).or_insert_with(BigRational::zero);
        *x += &k * c;
    }
    out.coeffs.retain(|_, c| !c.is_zero());
    out.constant += &k * &by.constant;
    out
}

/// Makes the largest absolute coefficient 1 so duplicates compare equal.
fn normalized(mut e: QLin) -> QLin {
    let m = e
        .coeffs
        .values()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigRational::one);
    if !m.is_zero() && !m.is_one() {
        for c in e.coeffs.values_mut() {
            *c /= &m;
        }
        e.constant /= &m;
    }
    e
}

fn fourier_motzkin(mut eqs: Vec<QLin>, mut ges: Vec<QLin>) -> Result<bool, String> {
    while let Some(eq) = eqs.pop() {
        let Some((v, a)) = eq.coeffs.iter().next().map(|(v, a)| (v.clone(), a.clone())) else {
            if !eq.constant.is_zero() {
                return Ok(false);
            }
            continue;
        };
        // v = -(eq - a v) / a
        let mut rest = eq.clone();
        rest.coeffs.remove(&v);
        let by = Lin {
            coeffs: rest
                .coeffs
                .iter()
                .map(|(w, c)| (w.clone(), -c / &a))
                .collect(),
            constant: -&rest.constant / &a,
        };
        for e in eqs.iter_mut() {
            *e = substitute_var(e, &v, &by);
        }
        for g in ges.iter_mut() {
            *g = substitute_var(g, &v, &by);
        }
    }
    loop {
        let mut live = Vec::with_capacity(ges.len());
        for g in ges {
            if g.coeffs.is_empty() {
                if g.constant.is_negative() {
                    return Ok(false);
                }
            } else {
                let g = normalized(g);
                if !live.contains(&g) {
                    live.push(g);
                }
            }
        }
        if live.is_empty() {
            return Ok(true);
        }
        let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for g in &live {
            for (v, c) in &g.coeffs {
                let e = counts.entry(v.as_str()).or_default();
                if c.is_positive() {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        let v = counts
            .iter()
            .min_by_key(|(_, (p, n))| p * n)
            .map(|(v, _)| v.to_string())
            .expect("some variable");
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for g in live {
            match g.coeffs.get(&v) {
                Some(c) if c.is_positive() => pos.push(g),
                Some(_) => neg.push(g),
                None => rest.push(g),
            }
        }
        for p in &pos {
            let a = p.coeffs[&v].clone();
            for n in &neg {
                let b = -n.coeffs[&v].clone();
                // b*p + a*n eliminates v with positive multipliers.
                let mut coeffs = BTreeMap::new();
                for w in p.coeffs.keys().chain(n.coeffs.keys()) {
                    if *w == v || coeffs.contains_key(w) {
                        continue;
                    }
                    let cp = p.coeffs.get(w).cloned().unwrap_or_else(BigRational::zero);
                    let cn = n.coeffs.get(w).cloned().unwrap_or_else(BigRational::zero);
                    let x = &b * cp + &a * cn;
                    if !x.is_zero() {
                        coeffs.insert(w.clone(), x);
                    }
                }
                let comb = Lin {
                    coeffs,
                    constant: &b * &p.constant + &a * &n.constant,
                };
                rest.push(comb);
            }
        }
        if rest.len() > MAX_CONSTRAINTS {
            return Err(format!("Fourier-Motzkin exceeded {MAX_CONSTRAINTS} constraints"));
        }
        ges = rest;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{parse_term, Signature, Type};

    fn t(src: &str) -> Term {
        let mut s = Signature::new();
        s.declare("v1", Type::Num).unwrap();
        s.declare("p1", Type::Bool).unwrap();
        parse_term(src, &s).unwrap()
    }

    #[test]
    fn proves_linear_validities() {
        for src in [
            "_b > 0 => _b + 1 > 0",
            "_x >= 0 && _y >= 0 => _x + _y >= 0",
            "_x = _y + 1 => _x > _y",
            "v1 = _b + 1 => v1 = _b + 1",
            "_x > 0 || _x <= 0",
            "p1 || !p1",
            "2 * _x != 1",
            "_x > 2 * _y && _x < 2 * _y + 2 => _x = 2 * _y + 1",
        ] {
            assert_eq!(lia_valid(&t(src)), LiaOutcome::Valid, "{src}");
        }
    }

    #[test]
    fn rejects_non_validities() {
        for src in [
            "_b > 0 => _b - 1 > 0",
            "_x + _y > 0",
            "p1",
            "_x = _y => _x > 0",
        ] {
            assert_eq!(lia_valid(&t(src)), LiaOutcome::NotProven, "{src}");
        }
    }

    #[test]
    fn nonlinear_input_is_unknown() {
        assert!(matches!(lia_valid(&t("_x * _y >= 0")), LiaOutcome::Unknown(_)));
    }
}
