//! Big-O and eventual big-O for unary weighted automata.
//!
//! `s` is big-O of `s'` iff the language containment condition holds and,
//! for every admissible `(ρ, k)` pair `x` of `s`, the lengths whose degree
//! from `s` is at least `x` are eventually included in those whose degree
//! from `s'` is at least `x`.

use serde::Serialize;

use crate::automaton::Query;
use crate::error::{Error, Result};
use crate::nfa::{eventually_included, lc_check, EventualInclusion, LcResult};
use crate::reductions::complete_for_eventual;
use crate::spectral::{annotate_with, DegreeMode, SccContext};
use crate::verdict::{RhoKJson, Verdict, Witness};

fn require_unary(q: &Query) -> Result<()> {
    let k = q.automaton.num_symbols();
    if k != 1 {
        return Err(Error::NotApplicable(format!("the unary decider needs one symbol, found {k}")));
    }
    Ok(())
}

fn lc_witness(q: &Query, w: &[usize]) -> Witness {
    Witness::LcCounterexample { word: w.iter().map(|&a| q.automaton.symbol_name(a).to_string()).collect() }
}

/// Decides whether `s` is big-O of `s'` on a one-letter automaton.
pub fn decide_unary(q: &Query) -> Result<Verdict> {
    require_unary(q)?;
    if q.s == q.s_prime {
        return Ok(Verdict::IsBigO);
    }
    if let LcResult::Counterexample(w) = lc_check(q) {
        return Ok(Verdict::NotBigO { witness: lc_witness(q, &w) });
    }
    let mut wa = q.automaton.normalize_single_final();
    let mut sources = [q.s, q.s_prime];
    for src in &mut sources {
        if wa.has_incoming(*src) {
            let name = format!("{}^", wa.state_name(*src));
            *src = wa.add_source_copy(*src, &name);
        }
    }
    let ctx = SccContext::new(&wa.total_matrix());
    let ann_s = annotate_with(&wa, &ctx, sources[0])?;
    let ann_sp = annotate_with(&wa, &ctx, sources[1])?;
    for x in ann_s.admissible() {
        let l1 = ann_s.degree_language_idx(x, DegreeMode::Geq);
        let l2 = ann_sp.degree_language_idx(x, DegreeMode::Geq);
        if let EventualInclusion::Witness { length, period, .. } = eventually_included(&l1, &l2)? {
            let x = RhoKJson::from(&ctx.to_rhok(x));
            return Ok(Verdict::NotBigO { witness: Witness::DegreeGap { x, length, period } });
        }
    }
    Ok(Verdict::IsBigO)
}

/// Answer of [`decide_unary_eventual`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum EventualVerdict {
    IsEventuallyBigO,
    NotEventuallyBigO { witness: Witness },
}

impl EventualVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EventualVerdict::IsEventuallyBigO)
    }
}

/// Decides whether `ν_s(w) ≤ C·ν_{s'}(w)` for all sufficiently long `w`:
/// the language difference must be finite and `s` must be big-O of `s'`
/// once every non-empty length gets a small extra weight from `s'`.
pub fn decide_unary_eventual(q: &Query) -> Result<EventualVerdict> {
    require_unary(q)?;
    if q.s == q.s_prime {
        return Ok(EventualVerdict::IsEventuallyBigO);
    }
    let wa = &q.automaton;
    if let EventualInclusion::Witness { length, .. } = eventually_included(&wa.nfa_of(q.s), &wa.nfa_of(q.s_prime))? {
        let word = vec![0; length];
        return Ok(EventualVerdict::NotEventuallyBigO { witness: lc_witness(q, &word) });
    }
    let completed = complete_for_eventual(q, None, None)?;
    let mut wa2 = completed.automaton;
    // a non-final copy of s, so that the empty word plays no role
    let name = format!("{}~", wa2.state_name(completed.s));
    let s2 = wa2.add_source_copy(completed.s, &name);
    wa2.set_final(s2, false);
    let q2 = Query::new(wa2, s2, completed.s_prime)?;
    Ok(match decide_unary(&q2)? {
        Verdict::NotBigO { witness } => EventualVerdict::NotEventuallyBigO { witness },
        _ => EventualVerdict::IsEventuallyBigO,
    })
}
