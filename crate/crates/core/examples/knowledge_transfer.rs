//! Reusing a finished proof for a specification that differs only by a
//! function the knowledge base declares equal.

use nhl::discharge::decide;
use nhl::hoare::{build_triple, generate_vcs, load_relation};
use nhl::imp::parse_program;
use nhl::kb::{load_kb, program_digest, transfer, KnowledgeBase, ProofRecord};
use nhl::semparse::Grammar;

fn main() -> anyhow::Result<()> {
    let g = Grammar::builtin();
    let program = parse_program("_balance := _balance + 1")?;

    let spec = g.parse_spec("All balances must be greater than zero.", 1)?.remove(0).form;
    let relation = load_relation("balance(x) = _balance", &g.signature)?;
    let triple = build_triple(&spec, &relation, &program)?;
    let verdicts: Vec<_> = generate_vcs(&triple)
        .into_iter()
        .map(|vc| (vc.provenance, decide(&vc, &KnowledgeBase::default()).name().to_string()))
        .collect();
    let record = ProofRecord::new(spec, relation, &program, verdicts);
    print!("{}", record.to_text());

    let kb = load_kb("equal balance valueof", &g.signature)?;
    let new_spec = g.parse_spec("All values must be greater than zero.", 1)?.remove(0).form;
    let new_relation = load_relation("valueof(x) = _balance", &g.signature)?;
    let digest = program_digest(&program);
    println!(
        "\nwith the KB:    {:?}",
        transfer(&record, &kb, &new_spec, &new_relation, &digest)
    );
    println!(
        "without it:     {:?}",
        transfer(&record, &KnowledgeBase::default(), &new_spec, &new_relation, &digest)
    );
    Ok(())
}
