//! A grammar written from scratch: a tiny arithmetic language whose
//! bracketing ambiguity shows up as several ranked readings.

use nhl::semparse::load_grammar;

const LEXICON: &str = "\
one | N | 1 | 0
two | N | 2 | 0
three | N | 3 | 0
plus | OP | lam a: Num. lam b: Num. a + b | 0
times | OP | lam a: Num. lam b: Num. a * b | 0
is | IS | lam a: Num. lam b: Num. a = b | 0
";

const RULES: &str = "\
E -> N | #1 | 0
E -> E OPE | #2(#1) | -0.1
OPE -> OP E | lam a: Num. #1(a, #2) | 0
S -> E ISE | #2(#1) | 0
ISE -> IS E | lam a: Num. #1(a, #2) | 0
";

fn main() -> anyhow::Result<()> {
    let g = load_grammar(LEXICON, RULES)?;
    for (cat, ty) in g.categories() {
        println!("{cat:<4} : {ty}");
    }
    for r in g.parse_sentence("one plus two times three is three times three", "S", 10)? {
        println!("{r}");
    }
    Ok(())
}
