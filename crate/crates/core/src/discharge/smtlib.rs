use crate::hoare::Vc;
use crate::lambda::{builtin, is_numeral, Signature, Term, Type};

/// SMT-LIB v2 (AUFLIA) script checking the VC: `(assert (not F))` is
/// unsatisfiable iff `F` is valid.
pub fn export_smtlib(vc: &Vc) -> String {
    smtlib_script(&vc.formula, Some(&vc.provenance.to_string()))
}

pub fn smtlib_script(formula: &Term, label: Option<&str>) -> String {
    let mut decls: Vec<(String, Type)> = Vec::new();
    collect(formula, &mut decls);
    let mut out = String::new();
    if let Some(l) = label {
        out.push_str(&format!("; {l}\n"));
    }
    out.push_str("(set-logic AUFLIA)\n(declare-sort Entity 0)\n");
    for (name, ty) in &decls {
        let (args, res) = ty.uncurry();
        let args: Vec<&str> = args.into_iter().map(sort).collect();
        out.push_str(&format!(
            "(declare-fun {} ({}) {})\n",
            symbol(name),
            args.join(" "),
            sort(res)
        ));
    }
    out.push_str(&format!("(assert (not {}))\n(check-sat)\n", expr(formula)));
    out
}

fn collect(t: &Term, out: &mut Vec<(String, Type)>) {
    t.for_each_const(&mut |n, ty| {
        let declared = n == builtin::POST || !(Signature::is_builtin(n) || is_numeral(n));
        if declared && !out.iter().any(|(m, _)| m == n) {
            out.push((n.to_string(), ty.clone()));
        }
    });
}

fn sort(t: &Type) -> &'static str {
    match t {
        Type::Entity => "Entity",
        Type::Num => "Int",
        Type::Bool => "Bool",
        Type::Arrow(..) => "Unsupported",
    }
}

fn symbol(name: &str) -> String {
    let simple = |c: char| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c);
    let ok = name.chars().all(simple)
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && !matches!(name, "forall" | "exists" | "let" | "par" | "_" | "!" | "as");
    if ok {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

fn expr(t: &Term) -> String {
    if let Some(n) = t.as_int() {
        return if n.sign() == num_bigint::Sign::Minus {
            format!("(- {})", -n)
        } else {
            n.to_string()
        };
    }
    if let Some((q, x, ty, body)) = t.as_quant() {
        return format!("({} (({} {})) {})", q.name(), symbol(x), sort(ty), expr(body));
    }
    if let Some((op, a, b)) = t.as_binary() {
        let sym = match op {
            builtin::AND => Some("and"),
            builtin::OR => Some("or"),
            builtin::IMPLIES => Some("=>"),
            builtin::EQ => Some("="),
            builtin::GT => Some(">"),
            builtin::LT => Some("<"),
            builtin::GE => Some(">="),
            builtin::LE => Some("<="),
            builtin::PLUS => Some("+"),
            builtin::MINUS => Some("-"),
            builtin::TIMES => Some("*"),
            _ => None,
        };
        if let Some(s) = sym {
            return format!("({s} {} {})", expr(a), expr(b));
        }
    }
    if let Some(a) = t.as_not() {
        return format!("(not {})", expr(a));
    }
    match t {
        Term::Var(x, _) => symbol(x),
        Term::Const(c, _) => symbol(c),
        Term::Abs(x, ty, b) => format!("(lambda (({} {})) {})", symbol(x), sort(ty), expr(b)),
        Term::App(..) => {
            let (head, args) = t.spine();
            let args: Vec<String> = args.into_iter().map(expr).collect();
            format!("({} {})", expr(head), args.join(" "))
        }
    }
}
