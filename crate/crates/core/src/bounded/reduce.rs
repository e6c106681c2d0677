//! Reductions from bounded languages to letter-bounded ones, and from
//! letter-bounded ones to plus-letter-bounded sub-queries with one fresh
//! symbol per block.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::automaton::{Query, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::graph::tarjan;
use crate::nfa::{inclusion_counterexample, star_bound_nfa, Nfa};
use crate::rational::Rational;

/// A query whose languages lie in `a₁*⋯a_m*` for the given symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct LetterBounded {
    pub query: Query,
    pub letters: Vec<usize>,
    /// Display name of each block, in the caller's original alphabet.
    pub names: Vec<String>,
}

/// A query over symbols `b₁…b_m` (symbol `i` is block `i + 1`) whose
/// languages lie in `b₁⁺⋯b_m⁺`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlusInstance {
    pub query: Query,
    pub blocks: Vec<String>,
}

impl PlusInstance {
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Word `b₁^{n₁}⋯b_m^{n_m}`.
    pub fn word(&self, lengths: &[u64]) -> Vec<usize> {
        lengths.iter().enumerate().flat_map(|(i, &n)| std::iter::repeat_n(i, n as usize)).collect()
    }
}

/// Finds symbols `a₁…a_m` with `L_s ⊆ a₁*⋯a_m*`, or `None` when the
/// language is not letter-bounded.
pub fn detect_letter_bounded(wa: &WeightedAutomaton, s: usize) -> Option<Vec<usize>> {
    let n = wa.num_states();
    let reach = wa.reachable_from(&[s]);
    let co = wa.coreachable();
    let useful: Vec<bool> = (0..n).map(|q| reach[q] && co[q]).collect();
    if !useful[s] {
        return Some(Vec::new());
    }
    let mut adj = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for (q, a, q2, _) in wa.transitions() {
        if useful[q] && useful[q2] {
            adj[q].push(q2);
            edges.push((q, a, q2));
        }
    }
    let sccs = tarjan(&adj);
    let nc = sccs.components.len();
    let mut loop_letter: Vec<Option<usize>> = vec![None; nc];
    let mut entering: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nc];
    for &(q, a, q2) in &edges {
        let (c, c2) = (sccs.comp_of[q], sccs.comp_of[q2]);
        if c == c2 {
            match loop_letter[c] {
                Some(b) if b != a => return None,
                _ => loop_letter[c] = Some(a),
            }
        } else {
            entering[c2].insert(a);
        }
    }
    // Tarjan lists sinks first
    let mut seq = Vec::new();
    for c in (0..nc).rev() {
        if !sccs.components[c].iter().any(|&q| useful[q]) {
            continue;
        }
        seq.extend(entering[c].iter().copied());
        seq.extend(loop_letter[c]);
    }
    seq.dedup();
    let nfa = wa.nfa_of(s);
    let holds = |letters: &[usize]| {
        inclusion_counterexample(&nfa, &star_bound_nfa(wa.alphabet(), letters)).ok().flatten().is_none()
    };
    if !holds(&seq) {
        return None;
    }
    // drop redundant blocks greedily
    let mut i = 0;
    while i < seq.len() {
        let mut shorter = seq.clone();
        shorter.remove(i);
        shorter.dedup();
        if holds(&shorter) {
            seq = shorter;
            i = 0;
        } else {
            i += 1;
        }
    }
    Some(seq)
}

/// NFA for `w₁*⋯w_m*`.
pub fn words_star_nfa(alphabet: &[String], words: &[Vec<usize>]) -> Nfa {
    // hub i: the last word read was w_i (hub 0 is also the start)
    let m = words.len();
    let mut n = Nfa::new(m.max(1), alphabet.to_vec(), 0);
    for i in 0..m.max(1) {
        n.set_final(i, true);
    }
    for (i, w) in words.iter().enumerate() {
        // read w_i from hub j ≤ i and land in hub i
        let mut prev: Vec<usize> = (0..=i).collect();
        for (k, &a) in w.iter().enumerate() {
            let target = if k + 1 == w.len() { i } else { n.add_state() };
            for &p in &prev {
                n.add_transition(p, a, target);
            }
            prev = vec![target];
        }
    }
    n
}

fn word_name(wa: &WeightedAutomaton, w: &[usize]) -> String {
    w.iter().map(|&a| wa.symbol_name(a)).collect::<Vec<_>>().join("")
}

/// Transducer state: the start, position `pos` inside the `j`-th word of
/// index sequence `seq`, or the end of `seq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Tau {
    Init,
    At { seq: usize, j: usize, pos: usize },
    Done { seq: usize },
}

/// Relabels `w₁^{n₁}⋯w_m^{n_m}` as `a₁^{n₁}⋯a_m^{n_m}` by running a
/// transducer alongside the automaton and eliminating its silent moves.
pub fn bounded_to_letter_bounded(q: &Query, words: &[Vec<usize>]) -> Result<LetterBounded> {
    let wa = &q.automaton;
    if words.is_empty() {
        return Err(Error::InvalidInput("at least one bounding word is required".into()));
    }
    if words.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput("bounding words must be non-empty".into()));
    }
    let bound = words_star_nfa(wa.alphabet(), words);
    for (who, st) in [("s", q.s), ("s'", q.s_prime)] {
        if let Some(w) = inclusion_counterexample(&wa.nfa_of(st), &bound)? {
            return Err(Error::Structural(format!(
                "the language of {who} is not contained in the bound (word \"{}\")",
                wa.format_word(&w)
            )));
        }
    }
    let m = words.len();
    let seqs: Vec<Vec<usize>> =
        (1u64..(1 << m)).map(|mask| (0..m).filter(|&i| mask & (1 << i) != 0).collect()).collect();
    // successors of a product state: (symbol emitted or None, target, weight)
    let step = |p: usize, tau: Tau| -> Vec<(Option<usize>, (usize, Tau), Rational)> {
        let mut out = Vec::new();
        let from_at = |seq: usize, j: usize, pos: usize, out: &mut Vec<_>| {
            let wi = seqs[seq][j];
            let w = &words[wi];
            for (p2, wt) in wa.successors(p, w[pos]) {
                if pos + 1 < w.len() {
                    out.push((None, (p2, Tau::At { seq, j, pos: pos + 1 }), wt.clone()));
                } else {
                    out.push((Some(wi), (p2, Tau::At { seq, j, pos: 0 }), wt.clone()));
                    let next =
                        if j + 1 < seqs[seq].len() { Tau::At { seq, j: j + 1, pos: 0 } } else { Tau::Done { seq } };
                    out.push((Some(wi), (p2, next), wt.clone()));
                }
            }
        };
        match tau {
            Tau::Init => {
                for seq in 0..seqs.len() {
                    from_at(seq, 0, 0, &mut out);
                }
            }
            Tau::At { seq, j, pos } => from_at(seq, j, pos, &mut out),
            Tau::Done { .. } => {}
        }
        out
    };
    // boundary states: starts and targets of emitting moves
    let mut index: HashMap<(usize, Tau), usize> = HashMap::new();
    let mut boundary: Vec<(usize, Tau)> = Vec::new();
    let mut intern = |key: (usize, Tau), boundary: &mut Vec<(usize, Tau)>| -> usize {
        *index.entry(key).or_insert_with(|| {
            boundary.push(key);
            boundary.len() - 1
        })
    };
    let s0 = intern((q.s, Tau::Init), &mut boundary);
    let s1 = intern((q.s_prime, Tau::Init), &mut boundary);
    let mut edges: HashMap<(usize, usize, usize), Rational> = HashMap::new();
    let mut i = 0;
    while i < boundary.len() {
        // silent closure: depth-first over (state, accumulated weight)
        let mut stack = vec![(boundary[i], Rational::from_integer(1.into()))];
        while let Some(((p, tau), acc)) = stack.pop() {
            for (emit, target, wt) in step(p, tau) {
                let w = &acc * &wt;
                match emit {
                    None => stack.push((target, w)),
                    Some(letter) => {
                        let v = intern(target, &mut boundary);
                        *edges.entry((i, letter, v)).or_insert_with(Rational::zero) += w;
                    }
                }
            }
        }
        i += 1;
    }
    let tau_name = |t: Tau| match t {
        Tau::Init => "init".to_string(),
        Tau::At { seq, j, pos } => format!("{seq}.{j}.{pos}"),
        Tau::Done { seq } => format!("{seq}.end"),
    };
    let names: Vec<String> = boundary.iter().map(|&(p, t)| format!("{}|{}", wa.state_name(p), tau_name(t))).collect();
    let mut letter_names: Vec<String> = Vec::new();
    for w in words {
        let base = format!("({})", word_name(wa, w));
        let mut name = base.clone();
        let mut k = 2;
        while letter_names.contains(&name) {
            name = format!("{base}#{k}");
            k += 1;
        }
        letter_names.push(name);
    }
    let mut out = WeightedAutomaton::new(&names, &letter_names)?;
    let mut sorted: Vec<_> = edges.into_iter().collect();
    sorted.sort_by_key(|e| e.0);
    for ((u, a, v), w) in sorted {
        out.set_weight(u, a, v, w)?;
    }
    for (k, &(p, t)) in boundary.iter().enumerate() {
        if wa.is_final(p) && matches!(t, Tau::Init | Tau::Done { .. }) {
            out.set_final(k, true);
        }
    }
    Ok(LetterBounded { query: Query::new(out, s0, s1)?, letters: (0..m).collect(), names: letter_names })
}

/// Letter-bounded view of a query whose bound was detected automatically.
pub fn letter_bounded(q: &Query, letters: Vec<usize>) -> LetterBounded {
    let names = letters.iter().map(|&a| q.automaton.symbol_name(a).to_string()).collect();
    LetterBounded { query: q.clone(), letters, names }
}

/// One sub-query per strictly increasing subsequence of the blocks, with
/// adjacent repeated letters merged and duplicates removed.
pub fn letter_bounded_to_plus(lb: &LetterBounded) -> Result<Vec<PlusInstance>> {
    let m = lb.letters.len();
    if m > 20 {
        return Err(Error::Resource(format!("{m} blocks give too many sub-queries")));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u64..(1 << m) {
        let mut letters: Vec<usize> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        for i in (0..m).filter(|&i| mask & (1 << i) != 0) {
            if letters.last() != Some(&lb.letters[i]) {
                letters.push(lb.letters[i]);
                names.push(lb.names[i].clone());
            }
        }
        if seen.insert(letters.clone()) {
            out.push(relabel_plus_blocks(&lb.query, &letters, &names)?);
        }
    }
    Ok(out)
}

/// Intersects with `a₁⁺⋯a_k⁺` and relabels every transition by the block
/// it reads. Adjacent letters must differ.
pub fn relabel_plus_blocks(q: &Query, letters: &[usize], names: &[String]) -> Result<PlusInstance> {
    let wa = &q.automaton;
    let k = letters.len();
    if k == 0 {
        return Err(Error::InvalidInput("empty block sequence".into()));
    }
    if letters.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Structural("adjacent blocks with the same letter".into()));
    }
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states = vec![(q.s, 0usize)];
    index.insert((q.s, 0), 0);
    if q.s_prime != q.s {
        states.push((q.s_prime, 0));
        index.insert((q.s_prime, 0), 1);
    }
    let mut trans = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (p, blk) = states[i];
        let mut moves = Vec::new();
        if blk >= 1 {
            moves.push((letters[blk - 1], blk));
        }
        if blk < k {
            moves.push((letters[blk], blk + 1));
        }
        for (a, blk2) in moves {
            for (p2, w) in wa.successors(p, a) {
                let key = (p2, blk2);
                let j = *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                trans.push((i, blk2 - 1, j, w.clone()));
            }
        }
        i += 1;
    }
    let state_names: Vec<String> = states.iter().map(|&(p, b)| format!("{}#{b}", wa.state_name(p))).collect();
    let symbols: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();
    let mut out = WeightedAutomaton::new(&state_names, &symbols)?;
    for (u, a, v, w) in trans {
        out.set_weight(u, a, v, w)?;
    }
    for (j, &(p, b)) in states.iter().enumerate() {
        out.set_final(j, b == k && wa.is_final(p));
    }
    let sp = index[&(q.s_prime, 0)];
    Ok(PlusInstance { query: Query::new(out, 0, sp)?, blocks: names.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn words_upto(k: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &layer {
                for a in 0..k {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn aba() -> WeightedAutomaton {
        // a^i b^j a^k with i, k ≥ 0, j ≥ 1
        WeightedAutomaton::from_transitions(
            &["s", "x", "t"],
            &["a", "b"],
            &["x", "t"],
            &[
                ("s", "a", "s", rat(1, 2)),
                ("s", "b", "x", rat(1, 3)),
                ("x", "b", "x", rat(1, 2)),
                ("x", "a", "t", rat(1, 4)),
                ("t", "a", "t", rat(2, 3)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn detects_a_b_a() {
        let wa = aba();
        assert_eq!(detect_letter_bounded(&wa, 0), Some(vec![0, 1, 0]));
        let unary = WeightedAutomaton::from_transitions(&["s"], &["a"], &["s"], &[("s", "a", "s", rat(1, 2))]).unwrap();
        assert_eq!(detect_letter_bounded(&unary, 0), Some(vec![0]));
        let ab_star = WeightedAutomaton::from_transitions(
            &["s", "x"],
            &["a", "b"],
            &["s"],
            &[("s", "a", "x", rat(1, 1)), ("x", "b", "s", rat(1, 1))],
        )
        .unwrap();
        assert_eq!(detect_letter_bounded(&ab_star, 0), None);
    }

    #[test]
    fn plus_pieces_preserve_weights() {
        let wa = aba();
        let q = Query::new(wa.clone(), 0, 0).unwrap();
        let lb = letter_bounded(&q, vec![0, 1, 0]);
        let pieces = letter_bounded_to_plus(&lb).unwrap();
        // a+, b+, a+b+, b+a+, a+b+a+ (a+a+ merges into a+)
        assert_eq!(pieces.len(), 5);
        for w in words_upto(2, 6) {
            if w.is_empty() {
                continue;
            }
            let runs: Vec<(usize, u64)> = w.chunk_by(|x, y| x == y).map(|c| (c[0], c.len() as u64)).collect();
            let letters: Vec<usize> = runs.iter().map(|r| r.0).collect();
            let lengths: Vec<u64> = runs.iter().map(|r| r.1).collect();
            let names: Vec<String> = letters.iter().map(|&a| wa.symbol_name(a).to_string()).collect();
            let Some(p) = pieces.iter().find(|p| p.blocks == names) else {
                assert!(wa.weight(0, &w).is_zero(), "{w:?}");
                continue;
            };
            assert_eq!(p.query.automaton.weight(p.query.s, &p.word(&lengths)), wa.weight(0, &w), "{w:?}");
        }
    }

    #[test]
    fn transducer_matches_word_powers() {
        // (ab)^n with weight 2^-n
        let wa = WeightedAutomaton::from_transitions(
            &["s", "x"],
            &["a", "b"],
            &["s"],
            &[("s", "a", "x", rat(1, 2)), ("x", "b", "s", rat(1, 1))],
        )
        .unwrap();
        let q = Query::new(wa.clone(), 0, 0).unwrap();
        let lb = bounded_to_letter_bounded(&q, &[vec![0, 1]]).unwrap();
        let out = &lb.query.automaton;
        for n in 0..=6 {
            let w: Vec<usize> = (0..n).flat_map(|_| [0, 1]).collect();
            assert_eq!(out.weight(lb.query.s, &vec![0; n]), wa.weight(0, &w));
        }
        assert!(matches!(bounded_to_letter_bounded(&q, &[vec![0]]), Err(Error::Structural(_))));
        assert!(matches!(bounded_to_letter_bounded(&q, &[]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn overlapping_decompositions_agree() {
        // all words over {a,b}^* of the form (ab)^k, weight 1/3 per ab
        let wa = WeightedAutomaton::from_transitions(
            &["s", "x"],
            &["a", "b"],
            &["s"],
            &[("s", "a", "x", rat(1, 3)), ("x", "b", "s", rat(1, 1))],
        )
        .unwrap();
        let q = Query::new(wa.clone(), 0, 0).unwrap();
        let words = vec![vec![0, 1, 0, 1], vec![0], vec![1], vec![0, 1]];
        let lb = bounded_to_letter_bounded(&q, &words).unwrap();
        let target = wa.weight(0, &[0, 1, 0, 1, 0, 1, 0, 1]);
        let mut hits = 0;
        for n0 in 0..=2usize {
            for n3 in 0..=4usize {
                if 2 * n0 + n3 == 4 {
                    let w: Vec<usize> = std::iter::repeat_n(0, n0).chain(std::iter::repeat_n(3, n3)).collect();
                    assert_eq!(lb.query.automaton.weight(lb.query.s, &w), target);
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 3);
        // a⁴b⁴ is outside the language
        let w: Vec<usize> = [1usize, 2].iter().flat_map(|&l| std::iter::repeat_n(l, 4)).collect();
        assert!(lb.query.automaton.weight(lb.query.s, &w).is_zero());
    }
}
