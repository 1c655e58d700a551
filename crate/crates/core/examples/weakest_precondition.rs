//! Weakest preconditions, including the side conditions of annotated loops.

use nhl::hoare::wp;
use nhl::imp::{embed, parse_pexpr, parse_program};

fn main() -> anyhow::Result<()> {
    let post = embed(&parse_pexpr("_s >= 0")?);
    for src in [
        "_s := _s - 1",
        "if _x > 0 then _y := _x else _y := 0 - _x fi; _s := _y",
        "_s := 0; _i := 0; while _i < _n invariant _s >= 0 && _i >= 0 do _i := _i + 1; _s := _s + _i od",
    ] {
        let p = parse_program(src)?;
        let (pre, side) = wp(&p, &post);
        println!("{src}\n  wp = {pre}");
        for vc in side {
            println!("  {}: {}", vc.provenance, vc.formula);
        }
    }
    Ok(())
}
