//! The whole pipeline on one specification: parse, relate, generate VCs and
//! discharge them.

use nhl::discharge::decide;
use nhl::hoare::{build_triple, generate_vcs, load_relation};
use nhl::imp::parse_program;
use nhl::kb::KnowledgeBase;
use nhl::semparse::Grammar;

fn main() -> anyhow::Result<()> {
    let g = Grammar::builtin();
    let spec = &g.parse_spec("All totals must be non-negative.", 1)?[0];
    let relation = load_relation("total(x) = _s", &g.signature)?;
    let program = parse_program(
        "_s := 0; _i := 0; while _i < _n invariant _s >= 0 && _i >= 0 do _i := _i + 1; _s := _s + _i od",
    )?;
    let triple = build_triple(&spec.form, &relation, &program)?;
    println!("{triple}");
    let kb = KnowledgeBase::default();
    for vc in generate_vcs(&triple) {
        println!("{:<22} {:<7} {}", vc.provenance.to_string(), decide(&vc, &kb).to_string(), vc.formula);
    }
    Ok(())
}
