//! Parsing and running programs in the small imperative language.

use nhl::imp::{exec, parse_program, PState};

fn main() -> anyhow::Result<()> {
    let src = "_s := 0; _i := 0;
               while _i < _n invariant _s >= 0 && _i >= 0 do
                 _i := _i + 1; _s := _s + _i
               od";
    let p = parse_program(src)?;
    println!("{p}\n");
    for n in [0, 1, 5, 100] {
        let end = exec(&p, PState::new().with("_n", n), 10_000)?;
        println!("n = {n:<3} -> {end}");
    }
    Ok(())
}
