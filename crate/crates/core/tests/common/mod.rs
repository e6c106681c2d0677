//! Seeded generators and exact-arithmetic oracles shared by the
//! integration test targets.
#![allow(dead_code, clippy::needless_range_loop)]

use bigo_wa::automaton::{ProbAutomaton, Query, WeightedAutomaton};
use bigo_wa::nfa::{ChrobakCycle, ChrobakNf, Nfa};
use bigo_wa::rational::{rat, Rational};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A positive weight with a small denominator.
pub fn weight(r: &mut impl Rng) -> Rational {
    let d = *[2i64, 3, 4, 5, 8].choose(r).unwrap();
    rat(r.gen_range(1..=d), d)
}

/// Random unary NFA; each edge is present with probability `p`.
pub fn unary_nfa(r: &mut impl Rng, n: usize, p: f64) -> Nfa {
    let mut nfa = Nfa::unary(n, 0);
    for q in 0..n {
        for q2 in 0..n {
            if r.gen_bool(p) {
                nfa.add_transition(q, 0, q2);
            }
        }
        if r.gen_bool(0.35) {
            nfa.set_final(q, true);
        }
    }
    nfa
}

/// Random weighted automaton over `alphabet` whose states `0..n` are
/// "q0".."q{n-1}", with one extra final sink "t".
pub fn automaton_with_sink(r: &mut impl Rng, n: usize, alphabet: &[&str], p: f64) -> WeightedAutomaton {
    let mut states = names("q", n);
    states.push("t".into());
    let mut wa = WeightedAutomaton::new(&states, alphabet).unwrap();
    wa.set_final(n, true);
    for q in 0..n {
        for a in 0..alphabet.len() {
            for q2 in 0..=n {
                if r.gen_bool(p) {
                    wa.set_weight(q, a, q2, weight(r)).unwrap();
                }
            }
        }
    }
    wa
}

/// Random query on a unary automaton with a final sink; `s = q0`, `s' = q1`.
pub fn unary_query(r: &mut impl Rng, n: usize, p: f64) -> Query {
    let wa = automaton_with_sink(r, n.max(2), &["a"], p);
    Query::new(wa, 0, 1).unwrap()
}

/// Restricted Chrobak normal form with an accepting stem of length 1 and
/// total size at most `max_size`.
pub fn restricted_chrobak(r: &mut impl Rng, max_size: usize) -> ChrobakNf {
    let mut cycles = Vec::new();
    let mut budget = max_size - 1;
    let count = r.gen_range(1..=3);
    for _ in 0..count {
        if budget == 0 {
            break;
        }
        let len = r.gen_range(1..=budget.min(4));
        budget -= len;
        cycles.push(ChrobakCycle { length: len, accepting: vec![r.gen_range(0..len)] });
    }
    ChrobakNf::new(vec![true], cycles).unwrap()
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Universality of a stem-1 Chrobak form from residues alone: `a^0` via the
/// stem, `a^n` (`n ≥ 1`) iff some cycle accepts offset `(n-1) mod length`.
pub fn chrobak_universal(c: &ChrobakNf) -> bool {
    let l = c.cycles.iter().fold(1, |acc, x| lcm(acc, x.length));
    c.stem[0] && (0..l).all(|r| c.cycles.iter().any(|x| x.accepting.contains(&(r % x.length))))
}

/// Random probabilistic automaton over {a, b} with a non-accepting start.
pub fn prob_automaton(r: &mut impl Rng, n: usize) -> ProbAutomaton {
    let mut wa = WeightedAutomaton::new(&names("p", n), &["a", "b"]).unwrap();
    for q in 1..n {
        wa.set_final(q, r.gen_bool(0.6));
    }
    if n > 1 && !(1..n).any(|q| wa.is_final(q)) {
        wa.set_final(n - 1, true);
    }
    for q in 0..n {
        for a in 0..2 {
            // split one unit of mass into at most n pieces of eighths
            let mut left = 8i64;
            let mut targets: Vec<usize> = (0..n).collect();
            targets.shuffle(r);
            for (i, &q2) in targets.iter().enumerate() {
                let take = if i + 1 == n { left } else { r.gen_range(0..=left) };
                if take > 0 {
                    wa.set_weight(q, a, q2, rat(take, 8)).unwrap();
                }
                left -= take;
            }
        }
    }
    ProbAutomaton::new(wa, 0).unwrap()
}

/// All words over `k` symbols of length at most `max_len`.
pub fn words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for a in 0..k {
                let mut w2: Vec<usize> = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// `ν_q(w)` by summing products over all accepting paths; exponential,
/// independent of the matrix code.
pub fn path_weight(wa: &WeightedAutomaton, q: usize, w: &[usize]) -> Rational {
    match w.split_first() {
        None => {
            if wa.is_final(q) {
                Rational::one()
            } else {
                Rational::zero()
            }
        }
        Some((&a, rest)) => {
            let mut total = Rational::zero();
            for q2 in 0..wa.num_states() {
                let x = wa.weight_of(q, a, q2);
                if !x.is_zero() {
                    total += x * path_weight(wa, q2, rest);
                }
            }
            total
        }
    }
}

/// `(ν_s(w), ν_{s'}(w))` by forward vector products.
pub fn weights(q: &Query, w: &[usize]) -> (Rational, Rational) {
    (q.automaton.weight(q.s, w), q.automaton.weight(q.s_prime, w))
}

/// `ln(ν_s(w)/ν_{s'}(w))` for `w = a₁^{n₁}⋯a_m^{n_m}` over log-domain
/// matrix powers, robust for very long words.
pub fn log_ratio_blocks(q: &Query, letters: &[usize], lengths: &[u64]) -> f64 {
    fn log_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let m = (0..n).map(|k| a[i][k] + b[k][j]).fold(f64::NEG_INFINITY, f64::max);
                        if m == f64::NEG_INFINITY {
                            m
                        } else {
                            m + (0..n).map(|k| (a[i][k] + b[k][j] - m).exp()).sum::<f64>().ln()
                        }
                    })
                    .collect()
            })
            .collect()
    }
    let wa = &q.automaton;
    let n = wa.num_states();
    let mut acc: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { f64::NEG_INFINITY }).collect()).collect();
    for (&a, &len) in letters.iter().zip(lengths) {
        let mut base: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| bigo_wa::rational::to_f64(wa.weight_of(i, a, j)).ln()).collect())
            .collect();
        let mut e = len;
        while e > 0 {
            if e & 1 == 1 {
                acc = log_mul(&acc, &base);
            }
            base = log_mul(&base, &base);
            e >>= 1;
        }
    }
    let fin = |i: usize| {
        let v: Vec<f64> = wa.final_states().map(|f| acc[i][f]).collect();
        let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m + v.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
    };
    fin(q.s) - fin(q.s_prime)
}

/// `(u, c, v)`: prefix, cycle and suffix of a pumpable accepted word.
pub type Pump = (Vec<usize>, Vec<usize>, Vec<usize>);

/// A deterministic automaton over {a, b} with two weighted copies: the
/// `s` copy scales edge `e` by `r_e` relative to the `s'` copy. Returns
/// the query, the planted label and a pumping word `(u, c, v)` when the
/// label is NotBigO.
pub fn planted(r: &mut impl Rng, bad: bool) -> Option<(Query, bool, Option<Pump>)> {
    let n = r.gen_range(2..=4);
    let mut delta = vec![[None; 2]; n];
    for row in delta.iter_mut() {
        for slot in row.iter_mut() {
            if r.gen_bool(0.7) {
                *slot = Some(r.gen_range(0..n));
            }
        }
    }
    let fin = r.gen_range(0..n);
    // shortest words between states
    let path = |from: usize, to: usize| -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(p) = queue.pop_front() {
            if p == to {
                let mut w = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (pp, a) = prev[cur].unwrap();
                    w.push(a);
                    cur = pp;
                }
                w.reverse();
                return Some(w);
            }
            for a in 0..2 {
                if let Some(p2) = delta[p][a] {
                    if !seen[p2] {
                        seen[p2] = true;
                        prev[p2] = Some((p, a));
                        queue.push_back(p2);
                    }
                }
            }
        }
        None
    };
    let mut scale: Vec<[Rational; 2]> =
        (0..n).map(|_| [0, 1].map(|_| if r.gen_bool(0.4) { rat(15, 16) } else { Rational::one() })).collect();
    let mut pump = None;
    if bad {
        // a cycle through some state c: c -a-> d, then back from d to c
        let mut found = None;
        for c in 0..n {
            for a in 0..2 {
                let Some(d) = delta[c][a] else { continue };
                let (Some(u), Some(back), Some(v)) = (path(0, c), path(d, c), path(c, fin)) else { continue };
                let mut cyc = vec![a];
                cyc.extend(back);
                found = Some((c, u, cyc, v));
                break;
            }
            if found.is_some() {
                break;
            }
        }
        let (c, u, cyc, v) = found?;
        let mut p = c;
        for (i, &a) in cyc.iter().enumerate() {
            scale[p][a] = if i == 0 { rat(17, 16) } else { Rational::one() };
            p = delta[p][a].unwrap();
        }
        pump = Some((u, cyc, v));
    }
    let mut states = names("A", n);
    states.extend(names("B", n));
    let mut wa = WeightedAutomaton::new(&states, &["a", "b"]).unwrap();
    wa.set_final(fin, true);
    wa.set_final(n + fin, true);
    for p in 0..n {
        for a in 0..2 {
            if let Some(p2) = delta[p][a] {
                let w = weight(r);
                wa.set_weight(n + p, a, n + p2, w.clone()).unwrap();
                wa.set_weight(p, a, p2, w * &scale[p][a]).unwrap();
            }
        }
    }
    Some((Query::new(wa, 0, n).unwrap(), !bad, pump))
}

pub fn load_instance(name: &str) -> Query {
    let path = format!("{}/instances/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    bigo_wa::io::parse_query(&text, None, None).unwrap().value
}
