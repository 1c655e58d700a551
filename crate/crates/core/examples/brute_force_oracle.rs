//! Exhaustive finite-model search, the independent check behind the
//! prover's verdicts.

use nhl::discharge::{brute_force, decide_formula, DecideOptions};
use nhl::lambda::{parse_term, Signature, Type};

fn main() -> anyhow::Result<()> {
    let mut sig = Signature::new();
    sig.declare("balance", Type::arrow(Type::Entity, Type::Num))?;
    for src in [
        "(forall x. balance(x) > 0) => (forall x. balance(x) + 1 > 1)",
        "(exists x. balance(x) = _b) && _b > 2 => (forall x. balance(x) > 2)",
        "_a < _b && _b < _c => _a + 2 <= _c",
    ] {
        let f = parse_term(src, &sig)?;
        let verdict = decide_formula(&f, &Default::default(), &DecideOptions::default());
        let bounded = brute_force(&f, 3, 2)?;
        println!("{src}\n  decide: {verdict}\n  brute:  {bounded:?}");
    }
    Ok(())
}
