//! Parsing, typechecking and normalizing logical forms.

use nhl::lambda::{alpha_eq, canonical_key, normalize, parse_term, typecheck, Signature, Type};

fn main() -> anyhow::Result<()> {
    let mut sig = Signature::new();
    sig.declare("balance", Type::arrow(Type::Entity, Type::Num))?;

    // A determiner applied to a noun and a predicate, as the parser builds it.
    let src = "(lam f: Entity -> Num. lam p: Num -> Bool. forall x. p(f(x))) \
               (lam y. balance(y)) (lam n: Num. n > 0)";
    let t = parse_term(src, &sig)?;
    println!("term:   {t}");
    println!("type:   {}", typecheck(&t, &sig)?);
    let nf = normalize(&t)?;
    println!("normal: {nf}");

    let renamed = parse_term("forall z. balance(z) > 0", &sig)?;
    println!("alpha-equal to `{renamed}`: {}", alpha_eq(&nf, &renamed));
    println!("canonical key: {}", canonical_key(&nf));
    Ok(())
}
