//! The four specification shapes and the Hoare triples they become.

use nhl::hoare::{build_triple, load_relation};
use nhl::imp::parse_program;
use nhl::semparse::Grammar;

fn main() -> anyhow::Result<()> {
    let g = Grammar::builtin();
    let relation = load_relation("balance(x) = _balance", &g.signature)?;
    let program = parse_program("_balance := _balance + 1")?;
    for line in [
        "All balances must be greater than zero.",
        "Increment the balance.",
        "IF: all balances are positive THEN: increment the balance.",
        "IF: the balance is greater than 0 and the balance is incremented \
         THEN AFTER: all new balances must be greater than 1.",
    ] {
        let best = &g.parse_spec(line, 1)?[0];
        println!("{line}\n  {}", best.form);
        let triple = build_triple(&best.form, &relation, &program)?;
        for l in triple.to_string().lines() {
            println!("    {l}");
        }
    }
    Ok(())
}
