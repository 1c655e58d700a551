//! Ranked readings of English sentences under the shipped grammar.
//!
//! `cargo run --example parse_sentence -- "All amounts must be positive."`

use nhl::semparse::{Grammar, DECLARATIVE, IMPERATIVE};

fn main() -> anyhow::Result<()> {
    let g = Grammar::builtin();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sentences = if args.is_empty() {
        vec![
            "All balances must be greater than zero.".to_string(),
            "All amounts must be positive.".to_string(),
            "Increase the balance by 5 and double the total.".to_string(),
        ]
    } else {
        vec![args.join(" ")]
    };
    for s in &sentences {
        println!("{s}");
        for start in [DECLARATIVE, IMPERATIVE] {
            match g.parse_sentence(s, start, 5) {
                Ok(rs) => {
                    for r in rs {
                        println!("  {start:<3} {r}");
                        println!("      {}", r.serial);
                    }
                }
                Err(e) => println!("  {start:<3} {e}"),
            }
        }
    }
    Ok(())
}
