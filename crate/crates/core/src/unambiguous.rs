//! Polynomial-time big-O for automata that are unambiguous from both
//! query states.
//!
//! On the product of two copies, restricted to positive edges, each word of
//! `L_s` has exactly one path from `(s, s')` to a pair of final states and
//! the product of the edge ratios along it is `ν_s(w)/ν_{s'}(w)`. The ratio
//! is unbounded iff some useful cycle has ratio product above 1, which is
//! found by multiplicative Bellman-Ford over exact rationals.

use std::collections::VecDeque;

use num_traits::One;

use crate::automaton::{Query, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::nfa::{lc_check, LcResult};
use crate::rational::{format_rational, Rational};
use crate::verdict::{CycleEdge, Verdict, Witness};

/// Outcome of [`is_unambiguous_from`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambiguity {
    Unambiguous,
    /// A word with at least two accepting paths.
    Ambiguous(Vec<usize>),
}

impl Ambiguity {
    pub fn is_unambiguous(&self) -> bool {
        matches!(self, Ambiguity::Unambiguous)
    }
}

/// Checks that every word has at most one accepting path from `s`, by
/// searching pairs of simultaneous runs that have separated at some point.
pub fn is_unambiguous_from(wa: &WeightedAutomaton, s: usize) -> Ambiguity {
    let n = wa.num_states();
    let idx = |p: usize, q: usize, d: bool| (p * n + q) * 2 + usize::from(d);
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n * n * 2];
    let mut seen = vec![false; n * n * 2];
    let start = idx(s, s, false);
    seen[start] = true;
    let mut queue = VecDeque::from([(s, s, false)]);
    while let Some((p, q, d)) = queue.pop_front() {
        if d && wa.is_final(p) && wa.is_final(q) {
            let mut word = Vec::new();
            let mut cur = idx(p, q, d);
            while let Some((prev, a)) = parent[cur] {
                word.push(a);
                cur = prev;
            }
            word.reverse();
            return Ambiguity::Ambiguous(word);
        }
        let here = idx(p, q, d);
        for a in 0..wa.num_symbols() {
            for (p2, _) in wa.successors(p, a) {
                for (q2, _) in wa.successors(q, a) {
                    let d2 = d || p2 != q2;
                    // runs are symmetric, so keep p2 <= q2 once separated
                    let (p2, q2) = if d2 && p2 > q2 { (q2, p2) } else { (p2, q2) };
                    let j = idx(p2, q2, d2);
                    if !seen[j] {
                        seen[j] = true;
                        parent[j] = Some((here, a));
                        queue.push_back((p2, q2, d2));
                    }
                }
            }
        }
    }
    Ambiguity::Unambiguous
}

struct ProductEdge {
    from: usize,
    to: usize,
    symbol: usize,
    ratio: Rational,
}

struct Product {
    n: usize,
    edges: Vec<ProductEdge>,
    /// Product states both reachable from `(s, s')` and co-reachable.
    useful: Vec<bool>,
}

impl Product {
    fn pair(&self, v: usize) -> (usize, usize) {
        (v / self.n, v % self.n)
    }
}

fn ratio_product(wa: &WeightedAutomaton, s: usize, sp: usize) -> Product {
    let n = wa.num_states();
    let mut edges = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for (q1, a, q2, w) in wa.transitions() {
        for (p1, p2, w2) in wa.transitions().filter(|e| e.1 == a).map(|(p1, _, p2, w2)| (p1, p2, w2)) {
            let (u, v) = (q1 * n + p1, q2 * n + p2);
            out[u].push(v);
            inc[v].push(u);
            edges.push(ProductEdge { from: u, to: v, symbol: a, ratio: &w / w2 });
        }
    }
    let search = |adj: &[Vec<usize>], init: Vec<usize>| {
        let mut seen = vec![false; n * n];
        for &v in &init {
            seen[v] = true;
        }
        let mut stack = init;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    };
    let fwd = search(&out, vec![s * n + sp]);
    let finals: Vec<usize> = (0..n * n).filter(|&v| wa.is_final(v / n) && wa.is_final(v % n)).collect();
    let bwd = search(&inc, finals);
    let useful = (0..n * n).map(|v| fwd[v] && bwd[v]).collect();
    Product { n, edges, useful }
}

/// Index of an edge on a cycle whose ratio product exceeds 1, as a list of
/// edge indices in path order.
fn expansive_cycle(p: &Product) -> Option<Vec<usize>> {
    let m = p.n * p.n;
    let edges: Vec<usize> =
        (0..p.edges.len()).filter(|&e| p.useful[p.edges[e].from] && p.useful[p.edges[e].to]).collect();
    let vertices = p.useful.iter().filter(|&&u| u).count();
    let mut dist: Vec<Rational> = vec![Rational::one(); m];
    let mut pred: Vec<Option<usize>> = vec![None; m];
    let mut last = None;
    for _ in 0..=vertices {
        last = None;
        for &e in &edges {
            let ed = &p.edges[e];
            let cand = &dist[ed.from] * &ed.ratio;
            if cand > dist[ed.to] {
                dist[ed.to] = cand;
                pred[ed.to] = Some(e);
                last = Some(ed.to);
            }
        }
        last?;
    }
    // still relaxing: walk back to land on the cycle
    let mut v = last?;
    for _ in 0..vertices {
        v = p.edges[pred[v]?].from;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let e = pred[v]?;
        cycle.push(e);
        v = p.edges[e].from;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    Some(cycle)
}

/// Shortest word between product states (breadth-first over useful edges).
fn product_path(p: &Product, from: &[usize], to: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let m = p.n * p.n;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; m];
    let mut seen = vec![false; m];
    let mut queue = VecDeque::new();
    for &u in from {
        seen[u] = true;
        queue.push_back(u);
    }
    while let Some(u) = queue.pop_front() {
        if to(u) {
            let mut word = Vec::new();
            let mut cur = u;
            while let Some((prev, a)) = parent[cur] {
                word.push(a);
                cur = prev;
            }
            word.reverse();
            return Some(word);
        }
        for ed in p.edges.iter().filter(|e| e.from == u && p.useful[e.to]) {
            if !seen[ed.to] {
                seen[ed.to] = true;
                parent[ed.to] = Some((u, ed.symbol));
                queue.push_back(ed.to);
            }
        }
    }
    None
}

/// Decides big-O for a query that is unambiguous from `s` and from `s'`.
pub fn decide_unambiguous(q: &Query) -> Result<Verdict> {
    let wa = &q.automaton;
    for (who, st) in [("s", q.s), ("s'", q.s_prime)] {
        if let Ambiguity::Ambiguous(w) = is_unambiguous_from(wa, st) {
            return Err(Error::NotApplicable(format!(
                "the automaton is ambiguous from {who} (word \"{}\" has two accepting paths); use the unary or bounded decider",
                wa.format_word(&w)
            )));
        }
    }
    if let LcResult::Counterexample(w) = lc_check(q) {
        let word = w.iter().map(|&a| wa.symbol_name(a).to_string()).collect();
        return Ok(Verdict::NotBigO { witness: Witness::LcCounterexample { word } });
    }
    let p = ratio_product(wa, q.s, q.s_prime);
    let Some(cycle) = expansive_cycle(&p) else { return Ok(Verdict::IsBigO) };
    let n = p.n;
    let head = p.edges[cycle[0]].from;
    let names = |v: usize| {
        let (a, b) = p.pair(v);
        (wa.state_name(a).to_string(), wa.state_name(b).to_string())
    };
    let symbols = |w: Vec<usize>| w.into_iter().map(|a| wa.symbol_name(a).to_string()).collect::<Vec<_>>();
    let prefix = product_path(&p, &[q.s * n + q.s_prime], |v| v == head).expect("useful vertex is reachable");
    let suffix = product_path(&p, &[head], |v| wa.is_final(v / n) && wa.is_final(v % n))
        .expect("useful vertex is co-reachable");
    let mut total = Rational::one();
    let edges = cycle
        .iter()
        .map(|&e| {
            let ed = &p.edges[e];
            total *= &ed.ratio;
            CycleEdge {
                from: names(ed.from),
                symbol: wa.symbol_name(ed.symbol).to_string(),
                to: names(ed.to),
                ratio: format_rational(&ed.ratio),
            }
        })
        .collect();
    Ok(Verdict::NotBigO {
        witness: Witness::ExpansiveCycle {
            prefix: symbols(prefix),
            cycle: edges,
            suffix: symbols(suffix),
            ratio: format_rational(&total),
        },
    })
}
