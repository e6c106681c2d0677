//! Boolean automata: NFAs, DFAs, language containment, eventual inclusion
//! for unary languages and Chrobak normal form.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;

use crate::automaton::Query;
use crate::error::{Error, Result};
use crate::graph;

/// Nondeterministic automaton with a single start state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<String>,
    /// `delta[q][a]` = sorted successor list.
    delta: Vec<Vec<Vec<usize>>>,
    start: usize,
    finals: Vec<bool>,
}

impl Nfa {
    pub fn new(num_states: usize, alphabet: Vec<String>, start: usize) -> Nfa {
        let k = alphabet.len();
        Nfa {
            alphabet,
            delta: vec![vec![Vec::new(); k]; num_states],
            start,
            finals: vec![false; num_states],
        }
    }

    /// NFA over the single symbol `a`.
    pub fn unary(num_states: usize, start: usize) -> Nfa {
        Nfa::new(num_states, vec!["a".to_string()], start)
    }

    pub fn add_state(&mut self) -> usize {
        self.delta.push(vec![Vec::new(); self.alphabet.len()]);
        self.finals.push(false);
        self.delta.len() - 1
    }

    pub fn add_transition(&mut self, q: usize, a: usize, q2: usize) {
        let succ = &mut self.delta[q][a];
        if let Err(pos) = succ.binary_search(&q2) {
            succ.insert(pos, q2);
        }
    }

    pub fn set_final(&mut self, q: usize, f: bool) {
        self.finals[q] = f;
    }

    pub fn set_start(&mut self, q: usize) {
        self.start = q;
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn successors(&self, q: usize, a: usize) -> &[usize] {
        &self.delta[q][a]
    }

    /// Number of transitions.
    pub fn num_transitions(&self) -> usize {
        self.delta.iter().flatten().map(Vec::len).sum()
    }

    /// Image of a state set (as a bit vector) under symbol `a`.
    pub fn step(&self, set: &[bool], a: usize) -> Vec<bool> {
        let mut out = vec![false; self.num_states()];
        for (q, &in_set) in set.iter().enumerate() {
            if in_set {
                for &q2 in &self.delta[q][a] {
                    out[q2] = true;
                }
            }
        }
        out
    }

    pub fn initial_set(&self) -> Vec<bool> {
        let mut v = vec![false; self.num_states()];
        v[self.start] = true;
        v
    }

    pub fn set_accepts(&self, set: &[bool]) -> bool {
        set.iter().zip(&self.finals).any(|(a, b)| *a && *b)
    }

    pub fn accepts(&self, w: &[usize]) -> bool {
        let mut cur = self.initial_set();
        for &a in w {
            cur = self.step(&cur, a);
        }
        self.set_accepts(&cur)
    }

    /// Membership of `a^n` for a unary automaton.
    pub fn accepts_len(&self, n: usize) -> bool {
        self.accepts(&vec![0; n])
    }

    /// Adjacency lists ignoring labels.
    pub fn graph(&self) -> Vec<Vec<usize>> {
        self.delta
            .iter()
            .map(|row| {
                let mut v: Vec<usize> = row.iter().flatten().copied().collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(q) = stack.pop() {
            for succ in &self.delta[q] {
                for &q2 in succ {
                    if !seen[q2] {
                        seen[q2] = true;
                        stack.push(q2);
                    }
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev = vec![Vec::new(); n];
        for q in 0..n {
            for succ in &self.delta[q] {
                for &q2 in succ {
                    rev[q2].push(q);
                }
            }
        }
        let mut seen = self.finals.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| seen[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Language emptiness.
    pub fn is_empty(&self) -> bool {
        let r = self.reachable();
        !(0..self.num_states()).any(|q| r[q] && self.finals[q])
    }

    /// Keeps only states that are reachable and co-reachable (the start state
    /// is always kept). Returns the new automaton and the old-index map.
    pub fn trim(&self) -> (Nfa, Vec<Option<usize>>) {
        let r = self.reachable();
        let c = self.coreachable();
        let mut map = vec![None; self.num_states()];
        let mut next = 0;
        for q in 0..self.num_states() {
            if q == self.start || (r[q] && c[q]) {
                map[q] = Some(next);
                next += 1;
            }
        }
        let mut out = Nfa::new(next, self.alphabet.clone(), map[self.start].expect("start kept"));
        for q in 0..self.num_states() {
            let Some(nq) = map[q] else { continue };
            out.finals[nq] = self.finals[q];
            for (a, succ) in self.delta[q].iter().enumerate() {
                for &q2 in succ {
                    if let Some(nq2) = map[q2] {
                        out.add_transition(nq, a, nq2);
                    }
                }
            }
        }
        (out, map)
    }

    /// Subset construction restricted to reachable subsets.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut sets: Vec<Vec<bool>> = Vec::new();
        let init = self.initial_set();
        index.insert(init.clone(), 0);
        sets.push(init);
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = vec![None; k];
            for (a, slot) in row.iter_mut().enumerate() {
                let next = self.step(&sets[i], a);
                if next.iter().any(|&b| b) {
                    let id = match index.get(&next) {
                        Some(&id) => id,
                        None => {
                            let id = sets.len();
                            index.insert(next.clone(), id);
                            sets.push(next);
                            id
                        }
                    };
                    *slot = Some(id);
                }
            }
            delta.push(row);
            i += 1;
        }
        let finals = sets.iter().map(|s| self.set_accepts(s)).collect();
        Dfa { alphabet: self.alphabet.clone(), delta, start: 0, finals }
    }

    /// Same automaton over a larger alphabet; `map[a]` is the new index of
    /// the old symbol `a`.
    pub fn with_alphabet(&self, alphabet: Vec<String>, map: &[usize]) -> Nfa {
        let mut out = Nfa::new(self.num_states(), alphabet, self.start);
        out.finals = self.finals.clone();
        for q in 0..self.num_states() {
            for (a, succ) in self.delta[q].iter().enumerate() {
                for &q2 in succ {
                    out.add_transition(q, map[a], q2);
                }
            }
        }
        out
    }
}

/// Partial deterministic automaton (missing transitions go to an implicit sink).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Vec<String>,
    pub delta: Vec<Vec<Option<usize>>>,
    pub start: usize,
    pub finals: Vec<bool>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn accepts(&self, w: &[usize]) -> bool {
        let mut q = self.start;
        for &a in w {
            match self.delta[q][a] {
                Some(q2) => q = q2,
                None => return false,
            }
        }
        self.finals[q]
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.num_states(), self.alphabet.clone(), self.start);
        for q in 0..self.num_states() {
            n.finals[q] = self.finals[q];
            for (a, t) in self.delta[q].iter().enumerate() {
                if let Some(q2) = t {
                    n.add_transition(q, a, *q2);
                }
            }
        }
        n
    }

    /// Total version with an explicit sink state (appended last when needed).
    pub fn complete(&self) -> Dfa {
        let mut out = self.clone();
        if out.delta.iter().all(|row| row.iter().all(Option::is_some)) {
            return out;
        }
        let sink = out.delta.len();
        let k = out.alphabet.len();
        out.delta.push(vec![Some(sink); k]);
        out.finals.push(false);
        for row in &mut out.delta {
            for t in row.iter_mut() {
                if t.is_none() {
                    *t = Some(sink);
                }
            }
        }
        out
    }

    /// Complement relative to `Σ*`.
    pub fn complement(&self) -> Dfa {
        let mut c = self.complete();
        for f in &mut c.finals {
            *f = !*f;
        }
        c
    }

    /// Product automaton accepting when `accept(f1, f2)` holds.
    fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Dfa {
        let a = self.complete();
        let b = other.complete();
        let k = a.alphabet.len();
        let mut index = HashMap::new();
        let mut pairs = vec![(a.start, b.start)];
        index.insert((a.start, b.start), 0usize);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut row = vec![None; k];
            for (s, slot) in row.iter_mut().enumerate() {
                let next = (a.delta[p][s].expect("complete"), b.delta[q][s].expect("complete"));
                let id = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                *slot = Some(id);
            }
            delta.push(row);
            i += 1;
        }
        let finals = pairs.iter().map(|&(p, q)| accept(a.finals[p], b.finals[q])).collect();
        Dfa { alphabet: a.alphabet.clone(), delta, start: 0, finals }.minimize()
    }

    pub fn intersect(&self, other: &Dfa) -> Dfa {
        self.product(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &Dfa) -> Dfa {
        self.product(other, |x, y| x && !y)
    }

    pub fn is_empty(&self) -> bool {
        self.to_nfa().is_empty()
    }

    /// Moore partition refinement followed by removal of states that cannot
    /// reach acceptance. The result is a partial DFA.
    pub fn minimize(&self) -> Dfa {
        let d = self.complete();
        let n = d.num_states();
        let k = d.alphabet.len();
        // restrict to reachable states
        let mut reach = vec![false; n];
        let mut stack = vec![d.start];
        reach[d.start] = true;
        while let Some(q) = stack.pop() {
            for t in d.delta[q].iter().flatten() {
                if !reach[*t] {
                    reach[*t] = true;
                    stack.push(*t);
                }
            }
        }
        let mut class: Vec<usize> = (0..n).map(|q| usize::from(d.finals[q])).collect();
        let mut num_classes = 0;
        loop {
            let mut sig_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut new_class = vec![0; n];
            for q in 0..n {
                if !reach[q] {
                    continue;
                }
                let sig = (class[q], d.delta[q].iter().map(|t| class[t.expect("complete")]).collect());
                let next = sig_index.len();
                new_class[q] = *sig_index.entry(sig).or_insert(next);
            }
            let count = sig_index.len();
            class = new_class;
            if count == num_classes {
                break;
            }
            num_classes = count;
        }
        // representative automaton
        let mut rep_delta = vec![vec![None; k]; num_classes];
        let mut rep_final = vec![false; num_classes];
        for q in 0..n {
            if !reach[q] {
                continue;
            }
            let c = class[q];
            rep_final[c] = d.finals[q];
            for a in 0..k {
                rep_delta[c][a] = Some(class[d.delta[q][a].expect("complete")]);
            }
        }
        let rep = Dfa { alphabet: d.alphabet.clone(), delta: rep_delta, start: class[d.start], finals: rep_final };
        // drop dead classes (keeping the start)
        let live = rep.to_nfa().coreachable();
        let mut map = vec![None; num_classes];
        let mut next = 0;
        for c in 0..num_classes {
            if live[c] || c == rep.start {
                map[c] = Some(next);
                next += 1;
            }
        }
        let mut delta = vec![vec![None; k]; next];
        let mut finals = vec![false; next];
        for c in 0..num_classes {
            let Some(nc) = map[c] else { continue };
            finals[nc] = rep.finals[c];
            for (slot, t) in delta[nc].iter_mut().zip(&rep.delta[c]) {
                *slot = t.and_then(|t| map[t]);
            }
        }
        Dfa { alphabet: d.alphabet, delta, start: map[rep.start].expect("start kept"), finals }
    }
}

/// Boolean combination used by [`nfa_product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    Intersect,
    Difference,
}

fn check_same_alphabet(n1: &Nfa, n2: &Nfa) -> Result<()> {
    if n1.alphabet != n2.alphabet {
        return Err(Error::InvalidInput("automata over different alphabets".into()));
    }
    Ok(())
}

/// `L(n1) ∩ L(n2)` or `L(n1) ∖ L(n2)`.
pub fn nfa_product(n1: &Nfa, n2: &Nfa, mode: ProductMode) -> Result<Nfa> {
    check_same_alphabet(n1, n2)?;
    match mode {
        ProductMode::Intersect => {
            let k = n1.alphabet.len();
            let mut index = HashMap::new();
            let mut pairs = vec![(n1.start, n2.start)];
            index.insert((n1.start, n2.start), 0usize);
            let mut out = Nfa::new(1, n1.alphabet.clone(), 0);
            let mut i = 0;
            while i < pairs.len() {
                let (p, q) = pairs[i];
                out.finals[i] = n1.finals[p] && n2.finals[q];
                for a in 0..k {
                    for &p2 in &n1.delta[p][a] {
                        for &q2 in &n2.delta[q][a] {
                            let id = match index.get(&(p2, q2)) {
                                Some(&id) => id,
                                None => {
                                    let id = out.add_state();
                                    index.insert((p2, q2), id);
                                    pairs.push((p2, q2));
                                    id
                                }
                            };
                            out.add_transition(i, a, id);
                        }
                    }
                }
                i += 1;
            }
            Ok(out)
        }
        ProductMode::Difference => {
            let comp = n2.determinize().complement().to_nfa();
            nfa_product(n1, &comp, ProductMode::Intersect)
        }
    }
}

/// A plus-letter expression `a₁⁺⋯a_m⁺` (symbol indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusBound {
    pub letters: Vec<usize>,
}

impl PlusBound {
    /// NFA for `a₁⁺⋯a_m⁺` over `alphabet`: state `i` means "inside block `i`".
    pub fn nfa(&self, alphabet: &[String]) -> Nfa {
        let m = self.letters.len();
        let mut n = Nfa::new(m + 1, alphabet.to_vec(), 0);
        for (i, &a) in self.letters.iter().enumerate() {
            n.add_transition(i, a, i + 1);
            n.add_transition(i + 1, a, i + 1);
        }
        n.set_final(m, m > 0);
        if m == 0 {
            n.set_final(0, true);
        }
        n
    }

    pub fn dfa(&self, alphabet: &[String]) -> Dfa {
        self.nfa(alphabet).determinize().minimize()
    }
}

/// NFA for `a₁*⋯a_m*`.
pub fn star_bound_nfa(alphabet: &[String], letters: &[usize]) -> Nfa {
    let m = letters.len();
    let mut n = Nfa::new(m.max(1), alphabet.to_vec(), 0);
    for i in 0..m {
        n.set_final(i, true);
        for (j, &a) in letters.iter().enumerate().skip(i) {
            n.add_transition(i, a, j);
        }
    }
    if m == 0 {
        n.set_final(0, true);
    }
    n
}

/// `bound ∖ L(n)`; assumes `L(n)` is contained in the bound language.
pub fn nfa_complement_within(n: &Nfa, bound: &PlusBound) -> Nfa {
    let b = bound.dfa(n.alphabet());
    b.difference(&n.determinize()).to_nfa()
}

/// Outcome of [`lc_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LcResult {
    Holds,
    /// A shortest word with `ν_s(w) > 0` and `ν_{s'}(w) = 0`.
    Counterexample(Vec<usize>),
}

impl LcResult {
    pub fn holds(&self) -> bool {
        matches!(self, LcResult::Holds)
    }
}

/// (state of n1, subset of n2, parent index and symbol).
type SearchNode = (usize, Vec<bool>, Option<(usize, usize)>);

/// Shortest word in `L(n1) ∖ L(n2)`, if any. Subset construction on the
/// right-hand side with antichain pruning of subsumed pairs.
pub fn inclusion_counterexample(n1: &Nfa, n2: &Nfa) -> Result<Option<Vec<usize>>> {
    check_same_alphabet(n1, n2)?;
    let k = n1.alphabet.len();
    let mut nodes: Vec<SearchNode> = Vec::new();
    let mut antichain: HashMap<usize, Vec<Vec<bool>>> = HashMap::new();
    let subsumed = |chain: &HashMap<usize, Vec<Vec<bool>>>, q: usize, set: &[bool]| -> bool {
        chain.get(&q).is_some_and(|sets| {
            sets.iter().any(|s| s.iter().zip(set).all(|(x, y)| !*x || *y))
        })
    };
    let init = n2.initial_set();
    antichain.entry(n1.start).or_default().push(init.clone());
    nodes.push((n1.start, init, None));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (q, set) = (nodes[i].0, nodes[i].1.clone());
        if n1.finals[q] && !n2.set_accepts(&set) {
            let mut word = Vec::new();
            let mut cur = i;
            while let Some((parent, a)) = nodes[cur].2 {
                word.push(a);
                cur = parent;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for a in 0..k {
            let next = n2.step(&set, a);
            for &q2 in &n1.delta[q][a] {
                if subsumed(&antichain, q2, &next) {
                    continue;
                }
                let chain = antichain.entry(q2).or_default();
                chain.retain(|s| !s.iter().zip(&next).all(|(x, y)| !*y || *x));
                chain.push(next.clone());
                nodes.push((q2, next.clone(), Some((i, a))));
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    Ok(None)
}

/// Language containment condition `L_s ⊆ L_{s'}`.
pub fn lc_check(q: &Query) -> LcResult {
    let wa = &q.automaton;
    match inclusion_counterexample(&wa.nfa_of(q.s), &wa.nfa_of(q.s_prime)).expect("same alphabet") {
        None => LcResult::Holds,
        Some(w) => LcResult::Counterexample(w),
    }
}

fn require_unary(n: &Nfa) -> Result<()> {
    if n.alphabet.len() != 1 {
        return Err(Error::NotApplicable(format!(
            "expected a unary automaton, found {} symbols",
            n.alphabet.len()
        )));
    }
    Ok(())
}

/// Determinized unary language: `a^n` is accepted iff `prefix[n]` for
/// `n < ℓ`, else `loop[(n-ℓ) mod p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryLasso {
    pub prefix_accepting: Vec<bool>,
    pub loop_accepting: Vec<bool>,
}

impl UnaryLasso {
    pub fn accepts(&self, n: usize) -> bool {
        let l = self.prefix_accepting.len();
        if n < l {
            self.prefix_accepting[n]
        } else {
            self.loop_accepting[(n - l) % self.loop_accepting.len()]
        }
    }

    /// Number of states of the lasso-shaped DFA.
    pub fn size(&self) -> usize {
        self.prefix_accepting.len() + self.loop_accepting.len()
    }

    /// True when the language is finite.
    pub fn is_finite(&self) -> bool {
        self.loop_accepting.iter().all(|b| !b)
    }

    /// Determinizes a unary NFA by iterating the reachable subset sequence.
    pub fn from_nfa(n: &Nfa) -> Result<UnaryLasso> {
        require_unary(n)?;
        let (prefix, lp) = lasso_of(|set: &Vec<bool>| n.step(set, 0), n.initial_set());
        let bits = |v: &[Vec<bool>]| v.iter().map(|s| n.set_accepts(s)).collect();
        Ok(UnaryLasso { prefix_accepting: bits(&prefix), loop_accepting: bits(&lp) })
    }
}

/// Iterates `f` from `init` until a value repeats; returns (prefix, loop).
fn lasso_of<T: Clone + Eq + std::hash::Hash>(f: impl Fn(&T) -> T, init: T) -> (Vec<T>, Vec<T>) {
    let mut seen: HashMap<T, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut cur = init;
    loop {
        if let Some(&i) = seen.get(&cur) {
            let lp = seq.split_off(i);
            return (seq, lp);
        }
        seen.insert(cur.clone(), seq.len());
        seq.push(cur.clone());
        cur = f(&cur);
    }
}

/// Outcome of [`eventually_included`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventualInclusion {
    Included,
    /// `a^{length + i·period}` lies in `L(n1) ∖ L(n2)` for every `i ≥ 0`;
    /// `machine_size ≤ length ≤ 2·machine_size`.
    Witness { length: usize, period: usize, machine_size: usize },
}

/// Decides whether `L(n1) ∖ L(n2)` is finite for unary NFAs by joint
/// determinization into a lasso.
pub fn eventually_included(n1: &Nfa, n2: &Nfa) -> Result<EventualInclusion> {
    require_unary(n1)?;
    require_unary(n2)?;
    let (prefix, lp) = lasso_of(
        |(a, b): &(Vec<bool>, Vec<bool>)| (n1.step(a, 0), n2.step(b, 0)),
        (n1.initial_set(), n2.initial_set()),
    );
    let l = prefix.len();
    let p = lp.len();
    for (j, (a, b)) in lp.iter().enumerate() {
        if n1.set_accepts(a) && !n2.set_accepts(b) {
            return Ok(EventualInclusion::Witness { length: l + j + p, period: p, machine_size: l + p });
        }
    }
    Ok(EventualInclusion::Included)
}

/// One cycle of a Chrobak normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChrobakCycle {
    pub length: usize,
    /// Sorted accepting offsets, each `< length`.
    pub accepting: Vec<usize>,
}

/// Unary NFA shape: a stem path `s₁…s_k` whose last state feeds every
/// cycle's state 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChrobakNf {
    pub stem: Vec<bool>,
    pub cycles: Vec<ChrobakCycle>,
}

impl ChrobakNf {
    pub fn new(stem: Vec<bool>, cycles: Vec<ChrobakCycle>) -> Result<ChrobakNf> {
        if stem.is_empty() {
            return Err(Error::InvalidInput("Chrobak stem must be non-empty".into()));
        }
        for c in &cycles {
            if c.length == 0 || c.accepting.iter().any(|&o| o >= c.length) {
                return Err(Error::InvalidInput("invalid Chrobak cycle".into()));
            }
        }
        Ok(ChrobakNf { stem, cycles })
    }

    /// `a^n` accepted: stem position `n` for `n < k`, otherwise cycle offset `(n - k) mod |C|`.
    pub fn accepts(&self, n: usize) -> bool {
        let k = self.stem.len();
        if n < k {
            return self.stem[n];
        }
        self.cycles.iter().any(|c| c.accepting.contains(&((n - k) % c.length)))
    }

    pub fn size(&self) -> usize {
        self.stem.len() + self.cycles.iter().map(|c| c.length).sum::<usize>()
    }

    /// Each cycle carries at most one accepting offset.
    pub fn is_restricted(&self) -> bool {
        self.cycles.iter().all(|c| c.accepting.len() <= 1)
    }

    /// State layout: stem `0..k`, then each cycle's states consecutively.
    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::unary(self.size(), 0);
        let k = self.stem.len();
        for (i, &f) in self.stem.iter().enumerate() {
            n.set_final(i, f);
            if i + 1 < k {
                n.add_transition(i, 0, i + 1);
            }
        }
        let mut base = k;
        for c in &self.cycles {
            n.add_transition(k - 1, 0, base);
            for j in 0..c.length {
                n.add_transition(base + j, 0, base + (j + 1) % c.length);
                n.set_final(base + j, c.accepting.contains(&j));
            }
            base += c.length;
        }
        n
    }

    /// Least common multiple of the cycle lengths (1 without cycles).
    pub fn period(&self) -> usize {
        self.cycles.iter().fold(1, |acc, c| acc.lcm(&c.length))
    }
}

/// Converts a unary NFA to Chrobak normal form. Cycles come from the
/// non-trivial SCCs (one cycle of length equal to the SCC period, with the
/// residues realizable through that SCC); the stem covers every length
/// below a quadratic threshold and is then shortened as far as the cycles
/// already account for the language.
pub fn to_chrobak(n: &Nfa) -> Result<ChrobakNf> {
    require_unary(n)?;
    let size = n.num_states();
    let adj = n.graph();
    let sccs = graph::tarjan(&adj);
    let mut residue_sets: Vec<(usize, Vec<bool>)> = Vec::new();
    for (c, members) in sccs.components.iter().enumerate() {
        if !sccs.is_nontrivial(&adj, c) {
            continue;
        }
        let d = graph::period(&adj, &sccs.comp_of, members) as usize;
        let in_c = |q: usize| sccs.comp_of[q] == c;
        // BFS over (state, length mod d, visited C)
        let idx = |q: usize, r: usize, f: bool| (q * d + r) * 2 + usize::from(f);
        let mut seen = vec![false; size * d * 2];
        let mut queue = VecDeque::new();
        let s0 = (n.start, 0, in_c(n.start));
        seen[idx(s0.0, s0.1, s0.2)] = true;
        queue.push_back(s0);
        let mut residues = vec![false; d];
        while let Some((q, r, f)) = queue.pop_front() {
            if f && n.finals[q] {
                residues[r] = true;
            }
            for &q2 in &n.delta[q][0] {
                let nxt = (q2, (r + 1) % d, f || in_c(q2));
                if !seen[idx(nxt.0, nxt.1, nxt.2)] {
                    seen[idx(nxt.0, nxt.1, nxt.2)] = true;
                    queue.push_back(nxt);
                }
            }
        }
        if residues.iter().any(|&b| b) {
            residue_sets.push((d, residues));
        }
    }
    let cyc = |len: usize| residue_sets.iter().any(|(d, r)| r[len % d]);
    let threshold = 2 * size * size + size + 1;
    let mut membership = Vec::with_capacity(threshold);
    let mut cur = n.initial_set();
    for _ in 0..threshold {
        membership.push(n.set_accepts(&cur));
        cur = n.step(&cur, 0);
    }
    let mut k = threshold;
    while k > 1 && membership[k - 1] == cyc(k - 1) {
        k -= 1;
    }
    let mut cycles: Vec<ChrobakCycle> = residue_sets
        .iter()
        .map(|(d, r)| ChrobakCycle {
            length: *d,
            accepting: (0..*d).filter(|o| r[(k + o) % d]).collect(),
        })
        .filter(|c| !c.accepting.is_empty())
        .collect();
    cycles.sort();
    cycles.dedup();
    ChrobakNf::new(membership[..k].to_vec(), cycles)
}

/// Splits every cycle into copies carrying one accepting offset each.
pub fn to_restricted_chrobak(c: &ChrobakNf) -> ChrobakNf {
    let mut cycles = Vec::new();
    for cyc in &c.cycles {
        for &o in &cyc.accepting {
            cycles.push(ChrobakCycle { length: cyc.length, accepting: vec![o] });
        }
    }
    ChrobakNf { stem: c.stem.clone(), cycles }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_nfa(p: usize, accepting: &[usize]) -> Nfa {
        let mut n = Nfa::unary(p, 0);
        for i in 0..p {
            n.add_transition(i, 0, (i + 1) % p);
        }
        for &f in accepting {
            n.set_final(f, true);
        }
        n
    }

    #[test]
    fn single_cycle_chrobak() {
        let n = cycle_nfa(5, &[3]);
        let c = to_chrobak(&n).unwrap();
        assert_eq!(c.stem.len(), 1);
        assert_eq!(c.cycles.len(), 1);
        assert_eq!(c.cycles[0].length, 5);
        for len in 0..40 {
            assert_eq!(c.accepts(len), n.accepts_len(len));
        }
    }

    #[test]
    fn restricted_copies() {
        let c = ChrobakNf::new(vec![true], vec![ChrobakCycle { length: 4, accepting: vec![1, 3] }]).unwrap();
        let r = to_restricted_chrobak(&c);
        assert_eq!(r.cycles.len(), 2);
        assert!(r.is_restricted());
        for len in 0..30 {
            assert_eq!(r.accepts(len), c.accepts(len));
            assert_eq!(r.to_nfa().accepts_len(len), c.accepts(len));
        }
    }

    #[test]
    fn even_vs_at_least_three() {
        let even = cycle_nfa(2, &[0]);
        let mut ge3 = Nfa::unary(4, 0);
        for i in 0..3 {
            ge3.add_transition(i, 0, i + 1);
        }
        ge3.add_transition(3, 0, 3);
        ge3.set_final(3, true);
        assert_eq!(eventually_included(&even, &ge3).unwrap(), EventualInclusion::Included);
        match eventually_included(&ge3, &even).unwrap() {
            EventualInclusion::Witness { length, period, machine_size } => {
                assert!(length % 2 == 1 && period == 2);
                assert!(machine_size <= length && length <= 2 * machine_size);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(eventually_included(&even, &even).unwrap(), EventualInclusion::Included);
    }

    #[test]
    fn non_unary_rejected() {
        let n = Nfa::new(1, vec!["a".into(), "b".into()], 0);
        assert!(eventually_included(&n, &n).is_err());
        assert!(to_chrobak(&n).is_err());
    }

    #[test]
    fn inclusion_shortest_counterexample() {
        let ab = vec!["a".to_string(), "b".to_string()];
        // n1 accepts a*b, n2 accepts a b
        let mut n1 = Nfa::new(2, ab.clone(), 0);
        n1.add_transition(0, 0, 0);
        n1.add_transition(0, 1, 1);
        n1.set_final(1, true);
        let mut n2 = Nfa::new(3, ab, 0);
        n2.add_transition(0, 0, 1);
        n2.add_transition(1, 1, 2);
        n2.set_final(2, true);
        assert_eq!(inclusion_counterexample(&n1, &n2).unwrap(), Some(vec![1]));
        assert_eq!(inclusion_counterexample(&n2, &n1).unwrap(), None);
    }

    #[test]
    fn plus_bound_and_complement() {
        let ab = vec!["a".to_string(), "b".to_string()];
        let bound = PlusBound { letters: vec![0, 1] };
        let d = bound.dfa(&ab);
        assert!(d.accepts(&[0, 1]) && d.accepts(&[0, 0, 1, 1]));
        assert!(!d.accepts(&[1, 0]) && !d.accepts(&[0]) && !d.accepts(&[]));
        // n accepts a b only
        let mut n = Nfa::new(3, ab, 0);
        n.add_transition(0, 0, 1);
        n.add_transition(1, 1, 2);
        n.set_final(2, true);
        let c = nfa_complement_within(&n, &bound);
        assert!(!c.accepts(&[0, 1]));
        assert!(c.accepts(&[0, 0, 1]));
        assert!(!c.accepts(&[1]));
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        // two copies of "a*" collapse to one state
        let mut n = Nfa::unary(2, 0);
        n.add_transition(0, 0, 1);
        n.add_transition(1, 0, 0);
        n.set_final(0, true);
        n.set_final(1, true);
        let d = n.determinize().minimize();
        assert_eq!(d.num_states(), 1);
    }
}
