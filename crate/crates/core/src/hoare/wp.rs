use std::fmt;

use crate::discharge::Verdict;
use crate::imp::{embed, Stmt};
use crate::lambda::Term;

use super::triple::HoareTriple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Main,
    /// Loops are numbered from 1 in program (pre-)order.
    LoopPreservation(usize),
    LoopExit(usize),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Main => write!(f, "main"),
            Provenance::LoopPreservation(i) => write!(f, "loop-preservation({i})"),
            Provenance::LoopExit(i) => write!(f, "loop-exit({i})"),
        }
    }
}

impl Provenance {
    fn sort_key(self) -> (usize, u8) {
        match self {
            Provenance::Main => (0, 0),
            Provenance::LoopPreservation(i) => (i, 0),
            Provenance::LoopExit(i) => (i, 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vc {
    pub formula: Term,
    pub provenance: Provenance,
    pub verdict: Option<Verdict>,
}

impl Vc {
    pub fn new(formula: Term, provenance: Provenance) -> Vc {
        Vc {
            formula,
            provenance,
            verdict: None,
        }
    }
}

/// Weakest precondition of `stmt` for `q`, plus the side conditions of every
/// loop in program order.
pub fn wp(stmt: &Stmt, q: &Term) -> (Term, Vec<Vc>) {
    let mut vcs = Vec::new();
    let pre = wp_at(stmt, q, 1, &mut vcs);
    vcs.sort_by_key(|v| v.provenance.sort_key());
    (pre, vcs)
}

fn wp_at(stmt: &Stmt, q: &Term, base: usize, vcs: &mut Vec<Vc>) -> Term {
    match stmt {
        Stmt::Skip => q.clone(),
        Stmt::Assign(x, e) => q.replace(&Term::pvar(x.clone()), &embed(e)),
        Stmt::Seq(a, b) => {
            let mid = wp_at(b, q, base + a.loop_count(), vcs);
            wp_at(a, &mid, base, vcs)
        }
        Stmt::If(c, a, b) => {
            let c = embed(c);
            let wa = wp_at(a, q, base, vcs);
            let wb = wp_at(b, q, base + a.loop_count(), vcs);
            Term::and(
                Term::implies(c.clone(), wa),
                Term::implies(Term::not(c), wb),
            )
        }
        Stmt::While {
            cond,
            invariant,
            body,
        } => {
            let i = embed(invariant);
            let c = embed(cond);
            let wbody = wp_at(body, &i, base + 1, vcs);
            vcs.push(Vc::new(
                Term::implies(Term::and(i.clone(), c.clone()), wbody),
                Provenance::LoopPreservation(base),
            ));
            vcs.push(Vc::new(
                Term::implies(Term::and(i.clone(), Term::not(c)), q.clone()),
                Provenance::LoopExit(base),
            ));
            i
        }
    }
}

/// Main VC `pre => wp(S, post)` followed by the loop VCs.
pub fn generate_vcs(triple: &HoareTriple) -> Vec<Vc> {
    let (w, side) = wp(&triple.program, &triple.post);
    let mut out = vec![Vc::new(
        Term::implies(triple.pre.clone(), w),
        Provenance::Main,
    )];
    out.extend(side);
    out
}
