//! Rendering logical forms back into English, and a scripted
//! "Did you mean" session over the readings of an ambiguous sentence.

use nhl::lambda::parse_closed_term;
use nhl::paraphrase::{disambiguation_prompt, render, Outcome};
use nhl::semparse::{Grammar, DECLARATIVE};

fn main() -> anyhow::Result<()> {
    let g = Grammar::builtin();
    for src in [
        "forall x. balance(x) > 0",
        "(forall x. valueof(x) >= 0) && (forall y. total(y) <= 100)",
        "forall x. balance(post(x)) = balance(x) * 2",
    ] {
        let t = parse_closed_term(src, &g.signature)?;
        println!("{src}\n  => {}", render(&t, &g)?);
    }

    let readings = g.parse_sentence("All amounts must be positive.", DECLARATIVE, 5)?;
    // Reject the first suggestion and accept the second.
    let mut answers = [false, true].into_iter();
    let transcript = disambiguation_prompt(&readings, &g, |_| answers.next().unwrap_or(false));
    for p in &transcript.prompts {
        println!("{p}");
    }
    if let Outcome::Selected(i) = transcript.outcome {
        println!("chosen: {}", readings[i].logical_form);
    }
    Ok(())
}
