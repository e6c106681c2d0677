//! Interreductions between big-O and related problems, and generators of
//! labelled instances with known answers.

use num_traits::{One, Zero};

use crate::automaton::{validate_lmc, Lmc, ProbAutomaton, Query, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::nfa::{ChrobakNf, Dfa};
use crate::rational::{format_rational, int, pow, rat, Rational};

fn symbol_or_first(wa: &WeightedAutomaton, symbol: Option<usize>) -> Result<usize> {
    match symbol {
        Some(a) if a < wa.num_symbols() => Ok(a),
        Some(a) => Err(Error::InvalidInput(format!("symbol index {a} out of range"))),
        None if wa.num_symbols() > 0 => Ok(0),
        None => Err(Error::InvalidInput("the alphabet is empty".into())),
    }
}

fn add_fresh(wa: &mut WeightedAutomaton, hint: &str) -> usize {
    let name = wa.fresh_state_name(hint);
    wa.add_state(&name).expect("fresh name")
}

fn add_weight(wa: &mut WeightedAutomaton, q: usize, a: usize, q2: usize, w: Rational) {
    let cur = wa.weight_of(q, a, q2).clone();
    wa.set_weight(q, a, q2, cur + w).expect("non-negative weight");
}

/// Big-O to big-Θ: new states `q, q'` with `q -a/½-> s`, `q -a/½-> s'`
/// and `q' -a/1-> s'`. The returned query is `(q, q')`; `s` is big-O of
/// `s'` iff `q` is big-Θ of `q'`.
pub fn to_big_theta(q: &Query, symbol: Option<usize>) -> Result<Query> {
    let mut wa = q.automaton.clone();
    let a = symbol_or_first(&wa, symbol)?;
    let nq = add_fresh(&mut wa, "q");
    let nqp = add_fresh(&mut wa, "q'");
    add_weight(&mut wa, nq, a, q.s, rat(1, 2));
    add_weight(&mut wa, nq, a, q.s_prime, rat(1, 2));
    add_weight(&mut wa, nqp, a, q.s_prime, Rational::one());
    Query::new(wa, nq, nqp)
}

/// Splits every transition `p -a/w-> p2` into `p -a/w-> [t] -a/1-> p2`, so
/// that `ν_p(a₁…aₙ)` becomes the weight of `a₁a₁…aₙaₙ`. Returns the new
/// automaton; original states keep their indices.
pub fn double_letters(wa: &WeightedAutomaton) -> WeightedAutomaton {
    let mut out = WeightedAutomaton::new(wa.states(), wa.alphabet()).expect("distinct ids");
    for q in wa.final_states() {
        out.set_final(q, true);
    }
    for (p, a, p2, w) in wa.transitions() {
        let hint = format!("[{}-{}-{}]", wa.state_name(p), wa.symbol_name(a), wa.state_name(p2));
        let mid = add_fresh(&mut out, &hint);
        out.set_weight(p, a, mid, w).expect("non-negative");
        out.set_weight(mid, a, p2, Rational::one()).expect("non-negative");
    }
    out
}

/// Big-Θ to big-O: doubles letters and adds `q -a/½-> s`,
/// `q -a/½-> •₁ -a/1-> s'`, `q' -a/½-> s'`, `q' -a/½-> •₂ -a/1-> s`.
/// `s` is big-Θ of `s'` iff `q` is big-O of `q'` in the result.
pub fn from_big_theta(q: &Query, symbol: Option<usize>) -> Result<Query> {
    let mut wa = double_letters(&q.automaton);
    let a = symbol_or_first(&wa, symbol)?;
    let nq = add_fresh(&mut wa, "q");
    let nqp = add_fresh(&mut wa, "q'");
    let b1 = add_fresh(&mut wa, "bullet1");
    let b2 = add_fresh(&mut wa, "bullet2");
    add_weight(&mut wa, nq, a, q.s, rat(1, 2));
    add_weight(&mut wa, nq, a, b1, rat(1, 2));
    add_weight(&mut wa, b1, a, q.s_prime, Rational::one());
    add_weight(&mut wa, nqp, a, q.s_prime, rat(1, 2));
    add_weight(&mut wa, nqp, a, b2, rat(1, 2));
    add_weight(&mut wa, b2, a, q.s, Rational::one());
    Query::new(wa, nq, nqp)
}

/// Default completion weight: half the least positive weight, capped at ½.
pub fn default_delta(wa: &WeightedAutomaton) -> Rational {
    match wa.min_positive_weight() {
        Some(m) => std::cmp::min(m / int(2), rat(1, 2)),
        None => rat(1, 2),
    }
}

/// Adds a low-weight branch from `s'` so that every non-empty word (or
/// every non-empty word of `bound`) gets extra weight `δ^{|w|}` from `s'`.
///
/// The automaton is first normalized to a single final state `t`, and `s'`
/// is replaced by a fresh source copy if it has incoming transitions. The
/// returned query refers to the completed automaton. Weights of the empty
/// word are not preserved.
pub fn complete_for_eventual(q: &Query, delta: Option<Rational>, bound: Option<&Dfa>) -> Result<Query> {
    let orig = &q.automaton;
    let delta = delta.unwrap_or_else(|| default_delta(orig));
    if delta <= Rational::zero() || delta >= Rational::one() {
        return Err(Error::InvalidInput(format!("δ = {} is not in (0, 1)", format_rational(&delta))));
    }
    if orig.min_positive_weight().is_some_and(|m| delta >= m) {
        return Err(Error::InvalidInput(format!(
            "δ = {} is not below every positive weight",
            format_rational(&delta)
        )));
    }
    if let Some(d) = bound {
        if d.alphabet != orig.alphabet() {
            return Err(Error::InvalidInput("bounding DFA has a different alphabet".into()));
        }
    }
    let mut wa = orig.normalize_single_final();
    let t = wa.single_final().expect("normalized");
    let s = q.s;
    let sp = if wa.has_incoming(q.s_prime) {
        let name = format!("{}'", wa.state_name(q.s_prime));
        wa.add_source_copy(q.s_prime, &name)
    } else {
        q.s_prime
    };
    let sigma = wa.num_symbols();
    match bound {
        None => {
            let bullet = add_fresh(&mut wa, "bullet");
            for x in 0..sigma {
                add_weight(&mut wa, sp, x, t, delta.clone());
                add_weight(&mut wa, sp, x, bullet, delta.clone());
                add_weight(&mut wa, bullet, x, bullet, delta.clone());
                add_weight(&mut wa, bullet, x, t, delta.clone());
            }
        }
        Some(d) => {
            let bullets: Vec<usize> = (0..d.num_states()).map(|i| add_fresh(&mut wa, &format!("bullet{i}"))).collect();
            for x in 0..sigma {
                if let Some(d2) = d.delta[d.start][x] {
                    add_weight(&mut wa, sp, x, bullets[d2], delta.clone());
                    if d.finals[d2] {
                        add_weight(&mut wa, sp, x, t, delta.clone());
                    }
                }
                for (d1, &b1) in bullets.iter().enumerate() {
                    if let Some(d2) = d.delta[d1][x] {
                        add_weight(&mut wa, b1, x, bullets[d2], delta.clone());
                        if d.finals[d2] {
                            add_weight(&mut wa, b1, x, t, delta.clone());
                        }
                    }
                }
            }
        }
    }
    Query::new(wa, s, sp)
}

/// Output of [`gen_undecidable`]. Automaton state `i` keeps index `i`.
#[derive(Debug, Clone)]
pub struct UndecidableInstance {
    pub lmc: Lmc,
    pub s: usize,
    pub s_prime: usize,
    pub s_double_prime: usize,
    pub s0: usize,
    /// Copy of the automaton's start state.
    pub q_s: usize,
    pub acc: usize,
    pub rej: usize,
    pub init: usize,
}

/// Labelled Markov chain built from a two-letter probabilistic automaton:
/// a branch from `q_s` simulating it with weights scaled by ¼ (restarting
/// on `acc`, ending on `rej`) and a uniform branch from `s₀`.
pub fn gen_undecidable(pa: &ProbAutomaton) -> Result<UndecidableInstance> {
    let src = &pa.automaton;
    if src.num_symbols() != 2 {
        return Err(Error::InvalidInput("the probabilistic automaton must have exactly two letters".into()));
    }
    if src.is_final(pa.start) {
        return Err(Error::InvalidInput("the start state must not be accepting".into()));
    }
    let mut names: Vec<String> = src.states().iter().map(|q| format!("q_{q}")).collect();
    let specials = ["s", "s'", "s''", "s0", "t"];
    names.extend(specials.iter().map(|s| s.to_string()));
    let mut alphabet: Vec<String> = src.alphabet().to_vec();
    alphabet.extend(["acc", "rej", "init"].iter().map(|s| s.to_string()));
    let mut wa = WeightedAutomaton::new(&names, &alphabet)?;
    let n = src.num_states();
    let (s, sp, spp, s0, t) = (n, n + 1, n + 2, n + 3, n + 4);
    let (acc, rej, init) = (2, 3, 4);
    wa.set_final(t, true);
    let quarter = rat(1, 4);
    let half = rat(1, 2);
    for (q, a, q2, w) in src.transitions() {
        wa.set_weight(q, a, q2, w * &quarter)?;
    }
    for q in 0..n {
        if src.is_final(q) {
            wa.set_weight(q, acc, pa.start, half.clone())?;
        } else {
            wa.set_weight(q, rej, t, half.clone())?;
        }
    }
    for a in [0, 1, acc] {
        wa.set_weight(s0, a, s0, quarter.clone())?;
    }
    wa.set_weight(s0, rej, t, quarter.clone())?;
    wa.set_weight(s, init, s0, half.clone())?;
    wa.set_weight(s, init, pa.start, half)?;
    wa.set_weight(sp, init, s0, Rational::one())?;
    wa.set_weight(spp, init, s0, rat(99, 100))?;
    wa.set_weight(spp, init, pa.start, rat(1, 100))?;
    Ok(UndecidableInstance {
        lmc: Lmc::new(wa)?,
        s,
        s_prime: sp,
        s_double_prime: spp,
        s0,
        q_s: pa.start,
        acc,
        rej,
        init,
    })
}

/// Output of [`gen_hardness`]: a unary chain, the query `(s, s')` and the
/// ground truth. `is_big_o` holds iff every `aⁿ` with `n ≥ 1` is accepted,
/// which is universality whenever the stem state accepts.
#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub lmc: Lmc,
    pub query: Query,
    pub is_big_o: bool,
}

/// Unary chain from a Chrobak normal form with stem length 1 and exactly
/// one accepting state per cycle.
pub fn gen_hardness(nfa: &ChrobakNf) -> Result<HardnessInstance> {
    if nfa.stem.len() != 1 {
        return Err(Error::InvalidInput("the stem must have length 1".into()));
    }
    if nfa.cycles.iter().any(|c| c.accepting.len() != 1) {
        return Err(Error::InvalidInput("every cycle must have exactly one accepting state".into()));
    }
    let m = nfa.cycles.len();
    let mut names: Vec<String> = vec!["s".into(), "u".into(), "s'".into(), "v".into(), "t".into()];
    for (i, c) in nfa.cycles.iter().enumerate() {
        names.extend((0..c.length).map(|j| format!("c{}_{j}", i + 1)));
    }
    let mut wa = WeightedAutomaton::new(&names, &["a"])?;
    let (s, u, sp, v, t) = (0, 1, 2, 3, 4);
    wa.set_final(t, true);
    let half = rat(1, 2);
    wa.set_weight(s, 0, u, Rational::one())?;
    wa.set_weight(u, 0, u, half.clone())?;
    wa.set_weight(u, 0, t, half.clone())?;
    let share = Rational::new(1.into(), ((m + 1) as i64).into());
    wa.set_weight(sp, 0, v, share.clone())?;
    wa.set_weight(v, 0, v, rat(1, 4))?;
    wa.set_weight(v, 0, t, rat(3, 4))?;
    let mut base = 5;
    for c in &nfa.cycles {
        let len = c.length;
        wa.set_weight(sp, 0, base, share.clone())?;
        let stay = pow(&half, len as u64);
        for j in 0..len {
            let prev = base + (j + len - 1) % len;
            if c.accepting.contains(&j) {
                add_weight(&mut wa, prev, 0, base + j, stay.clone());
                add_weight(&mut wa, prev, 0, t, Rational::one() - &stay);
            } else {
                add_weight(&mut wa, prev, 0, base + j, Rational::one());
            }
        }
        base += len;
    }
    let horizon = 1 + nfa.period();
    let is_big_o = (1..=horizon).all(|n| nfa.accepts(n));
    Ok(HardnessInstance { query: Query::new(wa.clone(), s, sp)?, lmc: Lmc::new(wa)?, is_big_o })
}

/// Value-1 to big-O. Reading `$w$`, `s` has weight `(1/(|Σ|+1))^{|w|+1}`
/// and `s'` that weight times `1 − Pr(w)`. All other words have weight 0.
pub fn value1_to_bigo(pa: &ProbAutomaton) -> Result<Query> {
    let src = &pa.automaton;
    if src.alphabet().iter().any(|a| a == "$") {
        return Err(Error::InvalidInput("the alphabet already contains `$`".into()));
    }
    let mut names: Vec<String> = src.states().iter().map(|q| format!("q_{q}")).collect();
    names.extend(["s", "s'", "s0", "rej", "acc"].iter().map(|s| s.to_string()));
    let mut alphabet = src.alphabet().to_vec();
    alphabet.push("$".into());
    let mut wa = WeightedAutomaton::new(&names, &alphabet)?;
    let n = src.num_states();
    let (s, sp, s0, rej, acc) = (n, n + 1, n + 2, n + 3, n + 4);
    let dollar = src.num_symbols();
    let unit = Rational::new(1.into(), ((dollar + 1) as i64).into());
    wa.set_final(acc, true);
    for (q, a, q2, w) in src.transitions() {
        wa.set_weight(q, a, q2, w * &unit)?;
    }
    for q in 0..n {
        // acceptance is inverted
        let target = if src.is_final(q) { rej } else { acc };
        wa.set_weight(q, dollar, target, unit.clone())?;
    }
    wa.set_weight(sp, dollar, pa.start, Rational::one())?;
    wa.set_weight(s, dollar, s0, Rational::one())?;
    wa.set_weight(s0, dollar, acc, unit.clone())?;
    for a in 0..dollar {
        wa.set_weight(s0, a, s0, unit.clone())?;
    }
    wa.set_weight(rej, dollar, rej, Rational::one())?;
    Query::new(wa, s, sp)
}

/// Output of [`bigo_to_value1`].
#[derive(Debug, Clone)]
pub struct Value1Instance {
    pub pa: ProbAutomaton,
    /// Index of `q` in the copy for `s`.
    pub copy_s: Vec<usize>,
    /// Index of `q` in the copy for `s'`.
    pub copy_s_prime: Vec<usize>,
    pub acc: usize,
    pub rej: usize,
    pub sink1: usize,
    pub sink2: usize,
    pub dollar: usize,
}

/// Big-O to Value-1: two copies of the chain behind a `$`-restart state
/// `q₀`; finishing in the `s` copy accepts, in the `s'` copy rejects.
/// `s` is not big-O of `s'` iff the result has value 1.
pub fn bigo_to_value1(q: &Query) -> Result<Value1Instance> {
    let src = &q.automaton;
    validate_lmc(src).map_err(|v| Error::InvalidInput(format!("not a labelled Markov chain: {v}")))?;
    if src.alphabet().iter().any(|a| a == "$") {
        return Err(Error::InvalidInput("the alphabet already contains `$`".into()));
    }
    let reach = src.reachable_from(&[q.s, q.s_prime]);
    let co = src.coreachable();
    if let Some(bad) = (0..src.num_states()).find(|&p| reach[p] && !co[p]) {
        return Err(Error::InvalidInput(format!(
            "state `{}` cannot reach a final state, so long words keep mass",
            src.state_name(bad)
        )));
    }
    let n = src.num_states();
    let mut names: Vec<String> = src.states().iter().map(|p| format!("{p}_s")).collect();
    names.extend(src.states().iter().map(|p| format!("{p}_s'")));
    names.extend(["q0", "acc", "rej", "sink1", "sink2"].iter().map(|s| s.to_string()));
    let mut alphabet = src.alphabet().to_vec();
    alphabet.push("$".into());
    let mut wa = WeightedAutomaton::new(&names, &alphabet)?;
    let (q0, acc, rej, sink1, sink2) = (2 * n, 2 * n + 1, 2 * n + 2, 2 * n + 3, 2 * n + 4);
    let dollar = src.num_symbols();
    wa.set_final(acc, true);
    for off in [0, n] {
        for (p, a, p2, w) in src.transitions() {
            wa.set_weight(off + p, a, off + p2, w)?;
        }
        for p in 0..n {
            for a in 0..dollar {
                let mass = src.matrix(a)[p].iter().fold(Rational::zero(), |acc, w| acc + w);
                let deficit = Rational::one() - mass;
                if !deficit.is_zero() {
                    wa.set_weight(off + p, a, sink1, deficit)?;
                }
            }
            let target = match (src.is_final(p), off == 0) {
                (true, true) => acc,
                (true, false) => rej,
                (false, _) => q0,
            };
            wa.set_weight(off + p, dollar, target, Rational::one())?;
        }
    }
    wa.set_weight(q0, dollar, q.s, rat(1, 2))?;
    add_weight(&mut wa, q0, dollar, n + q.s_prime, rat(1, 2));
    for a in 0..dollar {
        wa.set_weight(q0, a, sink2, Rational::one())?;
        wa.set_weight(sink1, a, sink1, Rational::one())?;
    }
    wa.set_weight(sink1, dollar, q0, Rational::one())?;
    for p in [acc, rej, sink2] {
        for a in 0..=dollar {
            wa.set_weight(p, a, p, Rational::one())?;
        }
    }
    Ok(Value1Instance {
        pa: ProbAutomaton::new(wa, q0)?,
        copy_s: (0..n).collect(),
        copy_s_prime: (n..2 * n).collect(),
        acc,
        rej,
        sink1,
        sink2,
        dollar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfa::ChrobakCycle;

    fn all_words(sigma: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for a in 0..sigma {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn small() -> Query {
        let wa = WeightedAutomaton::from_transitions(
            &["s", "s'", "t"],
            &["a", "b"],
            &["t"],
            &[
                ("s", "a", "s", rat(1, 3)),
                ("s", "b", "t", rat(1, 2)),
                ("s'", "a", "s'", rat(1, 4)),
                ("s'", "b", "t", rat(1, 5)),
                ("s'", "a", "t", rat(1, 7)),
            ],
        )
        .unwrap();
        Query::named(wa, "s", "s'").unwrap()
    }

    #[test]
    fn big_theta_ratio_identity() {
        let q = small();
        let r = to_big_theta(&q, None).unwrap();
        let wa = &r.automaton;
        for w in all_words(2, 5) {
            let mut aw = vec![0];
            aw.extend(&w);
            let (num, den) = (wa.weight(r.s, &aw), wa.weight(r.s_prime, &aw));
            let (vs, vsp) = (q.automaton.weight(q.s, &w), q.automaton.weight(q.s_prime, &w));
            assert_eq!(num, (&vs + &vsp) / int(2));
            assert_eq!(den, vsp);
        }
    }

    #[test]
    fn doubled_words_keep_weight() {
        let q = small();
        let r = from_big_theta(&q, None).unwrap();
        let wa = &r.automaton;
        for w in all_words(2, 4) {
            let doubled: Vec<usize> = w.iter().flat_map(|&a| [a, a]).collect();
            assert_eq!(wa.weight(q.s, &doubled), q.automaton.weight(q.s, &w));
            if !w.is_empty() {
                let mut odd = doubled.clone();
                odd.pop();
                assert!(wa.weight(q.s, &odd).is_zero());
            }
        }
    }

    #[test]
    fn completion_adds_delta_power() {
        let q = small();
        let d = rat(1, 10);
        let r = complete_for_eventual(&q, Some(d.clone()), None).unwrap();
        for w in all_words(2, 5).into_iter().filter(|w| !w.is_empty()) {
            let before = q.automaton.weight(q.s_prime, &w);
            let after = r.automaton.weight(r.s_prime, &w);
            assert_eq!(&after - &before, pow(&d, w.len() as u64));
            assert_eq!(r.automaton.weight(r.s, &w), q.automaton.weight(q.s, &w));
        }
        assert!(complete_for_eventual(&q, Some(rat(1, 2)), None).is_err());
    }

    #[test]
    fn hardness_output_is_a_chain() {
        let c = ChrobakNf::new(
            vec![true],
            vec![
                ChrobakCycle { length: 2, accepting: vec![1] },
                ChrobakCycle { length: 3, accepting: vec![0] },
            ],
        )
        .unwrap();
        let h = gen_hardness(&c).unwrap();
        assert!(validate_lmc(h.lmc.automaton()).is_ok());
        assert!(!h.is_big_o);
    }
}
