//! Parikh images of languages inside `b₁⁺⋯b_m⁺` (symbol `i` is block `i`)
//! as finite unions of linear sets with axis-parallel periods.
//!
//! After determinizing jointly with the block structure, reading one block
//! from a fixed entry state is a lasso, so each (entry, exit) pair gives a
//! single count or an arithmetic progression. Chaining entry states across
//! blocks yields the sets.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::nfa::Nfa;

/// `{base + diag(periods)·λ : λ ∈ ℕ^m}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LinearSet {
    pub base: Vec<u64>,
    pub periods: Vec<u64>,
}

impl LinearSet {
    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.base.len()
            && v.iter().zip(&self.base).zip(&self.periods).all(|((&x, &b), &r)| {
                if r == 0 {
                    x == b
                } else {
                    x >= b && (x - b) % r == 0
                }
            })
    }

    /// Coordinates with a positive period.
    pub fn unbounded(&self) -> Vec<usize> {
        (0..self.periods.len()).filter(|&i| self.periods[i] > 0).collect()
    }

    pub fn member(&self, lambda: &[u64]) -> Vec<u64> {
        self.base.iter().zip(&self.periods).zip(lambda).map(|((&b, &r), &l)| b + r * l).collect()
    }
}

/// Deterministic view of `L(n) ∩ b₁⁺⋯b_m⁺`; states are tagged with their block.
pub(crate) struct BlockDfa {
    pub delta: Vec<Vec<Option<usize>>>,
    pub finals: Vec<bool>,
}

impl BlockDfa {
    pub fn new(n: &Nfa) -> BlockDfa {
        let m = n.alphabet().len();
        let mut index: HashMap<(Vec<bool>, usize), usize> = HashMap::new();
        let init = (n.initial_set(), 0usize);
        let mut states = vec![init.clone()];
        index.insert(init, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (set, blk) = states[i].clone();
            let mut row = vec![None; m];
            for (a, slot) in row.iter_mut().enumerate() {
                // stay in block `blk` (symbol blk-1) or move to the next one
                if !(blk >= 1 && a + 1 == blk || a == blk) {
                    continue;
                }
                let next = n.step(&set, a);
                if !next.iter().any(|&b| b) {
                    continue;
                }
                let key = (next, a + 1);
                let id = *index.entry(key.clone()).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                *slot = Some(id);
            }
            delta.push(row);
            i += 1;
        }
        let finals = states.iter().map(|(set, blk)| *blk == m && m > 0 && n.set_accepts(set)).collect();
        BlockDfa { delta, finals }
    }
}

/// Count vectors reachable per (block, entry state), as (base, period) pairs.
type Memo = HashMap<(usize, usize), BTreeSet<Vec<(u64, u64)>>>;

/// Parikh image of `L(n) ∩ b₁⁺⋯b_m⁺` as a sorted, duplicate-free list of
/// linear sets.
pub fn parikh_linear_sets(n: &Nfa) -> Vec<LinearSet> {
    let d = BlockDfa::new(n);
    let m = n.alphabet().len();
    if m == 0 {
        return Vec::new();
    }
    let mut memo: Memo = HashMap::new();
    let Some(first) = d.delta[0][0] else { return Vec::new() };
    let tails = block_tails(&d, m, 0, first, &mut memo);
    tails
        .into_iter()
        .map(|t| LinearSet { base: t.iter().map(|p| p.0).collect(), periods: t.iter().map(|p| p.1).collect() })
        .collect()
}

/// All `(base, period)` sequences for blocks `j..m` when block `j` is
/// entered at state `e` (after its first symbol).
fn block_tails(
    d: &BlockDfa,
    m: usize,
    j: usize,
    e: usize,
    memo: &mut Memo,
) -> BTreeSet<Vec<(u64, u64)>> {
    if let Some(v) = memo.get(&(j, e)) {
        return v.clone();
    }
    // lasso of states reached after 1, 2, ... symbols of block j
    let mut seq = vec![e];
    let mut pos_of: HashMap<usize, usize> = HashMap::from([(e, 0)]);
    let mut loop_start = None;
    while let Some(nx) = d.delta[*seq.last().expect("non-empty")][j] {
        if let Some(&p) = pos_of.get(&nx) {
            loop_start = Some(p);
            break;
        }
        pos_of.insert(nx, seq.len());
        seq.push(nx);
    }
    let mut out = BTreeSet::new();
    for (pos, &x) in seq.iter().enumerate() {
        let base = pos as u64 + 1;
        let period = match loop_start {
            Some(ls) if pos >= ls => (seq.len() - ls) as u64,
            _ => 0,
        };
        if j + 1 == m {
            if d.finals[x] {
                out.insert(vec![(base, period)]);
            }
        } else if let Some(e2) = d.delta[x][j + 1] {
            for tail in block_tails(d, m, j + 1, e2, memo) {
                let mut v = vec![(base, period)];
                v.extend(tail);
                out.insert(v);
            }
        }
    }
    memo.insert((j, e), out.clone());
    out
}
