//! An off-by-one program refuted with a concrete state.

use nhl::discharge::{decide, Verdict};
use nhl::hoare::{build_triple, generate_vcs, load_relation};
use nhl::imp::{exec, parse_program, PState};
use nhl::kb::KnowledgeBase;
use nhl::semparse::Grammar;

fn main() -> anyhow::Result<()> {
    let g = Grammar::builtin();
    let spec = &g.parse_spec("All balances must be greater than zero.", 1)?[0];
    let relation = load_relation("balance(x) = _balance", &g.signature)?;
    let program = parse_program("_balance := _balance - 1")?;
    let triple = build_triple(&spec.form, &relation, &program)?;
    let vc = &generate_vcs(&triple)[0];
    println!("VC: {}", vc.formula);
    match decide(vc, &KnowledgeBase::default()) {
        Verdict::Invalid(model) => {
            println!("counterexample: {model}");
            // Program variables appear in the model with integer values.
            let mut start = PState::new();
            for (name, v) in &model.assignments {
                if let (true, Ok(n)) = (name.starts_with('_'), v.parse::<i64>()) {
                    start = start.with(name, n);
                }
            }
            println!("running from {start} ends in {}", exec(&program, start.clone(), 0)?);
        }
        other => println!("unexpected verdict {other}"),
    }
    Ok(())
}
