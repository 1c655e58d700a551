//! SMT-LIB scripts for the VCs of a conditional specification, for
//! checking with an external solver.

use nhl::discharge::export_smtlib;
use nhl::hoare::{build_triple, generate_vcs, load_relation};
use nhl::imp::parse_program;
use nhl::semparse::Grammar;

fn main() -> anyhow::Result<()> {
    let g = Grammar::builtin();
    let spec = g
        .parse_spec("IF: all balances are positive THEN: increment the balance.", 1)?
        .remove(0)
        .form;
    let relation = load_relation("balance(x) = _balance", &g.signature)?;
    let program = parse_program("if _balance > 0 then _balance := _balance + 1 else skip fi")?;
    for vc in generate_vcs(&build_triple(&spec, &relation, &program)?) {
        println!("{}", export_smtlib(&vc));
    }
    Ok(())
}
