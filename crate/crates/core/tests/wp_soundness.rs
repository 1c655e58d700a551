//! Weakest preconditions checked by running programs.

mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nhl::discharge::{decide_formula, DecideOptions, Verdict};
use nhl::hoare::wp;
use nhl::imp::{embed, eval_bool, exec, parse_pexpr, parse_program, PState};

const FUEL: u64 = 10_000;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Loop-free programs: wp holds exactly on the states from which the
    /// program ends in the postcondition.
    #[test]
    fn wp_is_the_weakest_sound_precondition(seed in any::<u64>(), size in 1usize..=5) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let s = program(&mut r, size);
        let (q, qt) = post_condition(&mut r);
        let (w, side) = wp(&s, &qt);
        prop_assert!(side.is_empty());
        for st in states(-3, 3) {
            let end = exec(&s, st.clone(), 0).unwrap();
            prop_assert_eq!(eval_formula(&w, &st), eval_bool(&q, &end).unwrap(), "{} from {}", s, st);
        }
    }
}

/// Counting loops with candidate invariants. Whenever the prover accepts
/// every loop VC, runs from states satisfying wp must end in the
/// postcondition.
#[test]
fn proved_loops_are_partially_correct() {
    let invariants = ["true", "_z >= 0", "_x <= _y + 2", "_x <= _y + 2 && _z >= 0", "_x >= 0"];
    let posts = ["_z >= 0", "_x >= _y", "_x <= _y + 2", "_x = _y"];
    let (mut proved, mut rejected) = (0, 0);
    for inv in invariants {
        for post in posts {
            for step in 1..=3 {
                let src = format!(
                    "_z := 0; while _x < _y invariant {inv} do _x := _x + {step}; _z := _z + 1 od"
                );
                let s = parse_program(&src).unwrap();
                let q = parse_pexpr(post).unwrap();
                let (w, side) = wp(&s, &embed(&q));
                assert_eq!(side.len(), 2);
                let all_valid = side.iter().all(|vc| {
                    decide_formula(&vc.formula, &Default::default(), &DecideOptions::default())
                        == Verdict::Valid
                });
                if !all_valid {
                    rejected += 1;
                    continue;
                }
                proved += 1;
                for x in -4..=4 {
                    for y in -4..=4 {
                        let st = PState::new().with("_x", x).with("_y", y).with("_z", 7);
                        if eval_formula(&w, &st) {
                            let end = exec(&s, st.clone(), FUEL).unwrap();
                            assert!(eval_bool(&q, &end).unwrap(), "{src} {{{post}}} from {st}");
                        }
                    }
                }
            }
        }
    }
    assert!(proved > 0 && rejected > 0, "{proved} proved, {rejected} rejected");
}

/// Invariants that fail to be preserved are caught by some loop VC with a
/// concrete counterexample.
#[test]
fn broken_invariant_is_refuted() {
    let s = parse_program("while _x < _y invariant _x <= _y do _x := _x + 2 od").unwrap();
    let q = embed(&parse_pexpr("_x = _y").unwrap());
    let (_, side) = wp(&s, &q);
    let verdicts: Vec<Verdict> = side
        .iter()
        .map(|vc| decide_formula(&vc.formula, &Default::default(), &DecideOptions::default()))
        .collect();
    assert!(verdicts[0].is_invalid(), "preservation: {}", verdicts[0]);
    assert_eq!(verdicts[1], Verdict::Valid);
}
