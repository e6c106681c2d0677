//! Degree vectors for plus-letter-bounded automata.
//!
//! While block `i` is read, a path is annotated with `(ρ_i, k_i)`: the
//! largest radius among the SCCs of the block's transition matrix it
//! visits, and how many further SCCs of that radius it enters. Paths that
//! only visit loop-free singletons get `(δ, 0)`, with `δ` half the least
//! positive radius. `d_s(n⃗)` is the set of maximal vectors over the paths
//! from `s` reading `b₁^{n₁}⋯b_m^{n_m}`.
//!
//! A subset construction that carries, per state and block, the maximal
//! partial vectors realizes `d_s` and `d_{s'}` simultaneously; keeping only
//! maximal entries is sound because the annotation step is monotone.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebraic::{AlgebraicNumber, RhoK};
use crate::error::{Error, Result};
use crate::nfa::{Dfa, Nfa};
use crate::rational::rat;
use crate::spectral::{scc_decompose_matrix, PairIdx, RadiusTable};
use crate::verdict::RhoKJson;

use super::reduce::PlusInstance;

/// One `(ρ, k)` index pair per block.
pub type RhoVector = Vec<PairIdx>;

/// Cap on the number of states of the joint degree automaton.
pub const MAX_DEGREE_STATES: usize = 200_000;

/// Per-block SCC structure and the shared radius table (which contains 0
/// and δ).
#[derive(Debug, Clone)]
pub struct BlockContext {
    pub radii: RadiusTable,
    pub delta: usize,
    comp: Vec<Vec<usize>>,
    rho: Vec<Vec<usize>>,
    trivial: Vec<Vec<bool>>,
}

impl BlockContext {
    pub fn new(inst: &PlusInstance) -> BlockContext {
        let wa = &inst.query.automaton;
        let dags: Vec<_> = (0..wa.num_symbols()).map(|j| scc_decompose_matrix(wa.matrix(j))).collect();
        let positive: Vec<AlgebraicNumber> =
            dags.iter().flat_map(|d| d.sccs.iter().map(|s| s.radius.clone())).filter(|r| !r.is_zero()).collect();
        let delta_value = match positive.iter().min() {
            Some(r) => r.scale(&rat(1, 2)),
            None => AlgebraicNumber::one(),
        };
        let mut all = positive;
        all.push(delta_value.clone());
        let radii = RadiusTable::new(all);
        let delta = radii.index_of(&delta_value);
        let mut comp = Vec::new();
        let mut rho = Vec::new();
        let mut trivial = Vec::new();
        for d in &dags {
            comp.push(d.comp_of.clone());
            let tr: Vec<bool> = d.comp_of.iter().map(|&c| d.sccs[c].radius.is_zero()).collect();
            rho.push(
                d.comp_of
                    .iter()
                    .zip(&tr)
                    .map(|(&c, &t)| if t { delta } else { radii.index_of(&d.sccs[c].radius) })
                    .collect(),
            );
            trivial.push(tr);
        }
        BlockContext { radii, delta, comp, rho, trivial }
    }

    /// Annotation of a block that starts in `q` before any symbol is read.
    pub fn start(&self, j: usize, q: usize) -> PairIdx {
        PairIdx { rho: self.rho[j][q], k: 0 }
    }

    /// Annotation after the block-`j` transition `q → q2`.
    pub fn step(&self, j: usize, x: PairIdx, q: usize, q2: usize) -> PairIdx {
        if self.comp[j][q] == self.comp[j][q2] || self.trivial[j][q2] {
            return x;
        }
        let r2 = self.rho[j][q2];
        match r2.cmp(&x.rho) {
            std::cmp::Ordering::Equal => PairIdx { rho: x.rho, k: x.k + 1 },
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Greater => PairIdx { rho: r2, k: 0 },
        }
    }

    pub fn radius(&self, x: PairIdx) -> &AlgebraicNumber {
        self.radii.get(x.rho)
    }

    /// Radius of the SCC of `q` under block `j`, `None` for loop-free singletons.
    pub fn scc_radius(&self, j: usize, q: usize) -> Option<&AlgebraicNumber> {
        (!self.trivial[j][q]).then(|| self.radii.get(self.rho[j][q]))
    }

    pub fn same_scc(&self, j: usize, q: usize, q2: usize) -> bool {
        self.comp[j][q] == self.comp[j][q2]
    }

    pub fn to_rhok(&self, x: PairIdx) -> RhoK {
        RhoK::new(self.radii.get(x.rho).clone(), x.k)
    }

    pub fn to_json(&self, v: &[PairIdx]) -> Vec<RhoKJson> {
        v.iter().map(|&x| RhoKJson::from(&self.to_rhok(x))).collect()
    }
}

/// Pointwise order on vectors of equal length.
pub fn dominated(a: &[PairIdx], b: &[PairIdx]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Maximal elements, sorted and without duplicates.
pub fn maximal(vs: impl IntoIterator<Item = RhoVector>) -> Vec<RhoVector> {
    let all: BTreeSet<RhoVector> = vs.into_iter().collect();
    all.iter().filter(|v| !all.iter().any(|w| w != *v && dominated(v, w))).cloned().collect()
}

/// Entry of a subset state: automaton state, current block (0 before the
/// first symbol) and the vector for blocks `1..=block`.
type Entry = (usize, usize, RhoVector);

fn prune(entries: Vec<Entry>) -> BTreeSet<Entry> {
    let mut groups: BTreeMap<(usize, usize), Vec<RhoVector>> = BTreeMap::new();
    for (q, b, v) in entries {
        groups.entry((q, b)).or_default().push(v);
    }
    groups.into_iter().flat_map(|((q, b), vs)| maximal(vs).into_iter().map(move |v| (q, b, v))).collect()
}

fn side_step(inst: &PlusInstance, ctx: &BlockContext, side: &BTreeSet<Entry>, j: usize) -> BTreeSet<Entry> {
    let wa = &inst.query.automaton;
    let mut next = Vec::new();
    for (q, blk, v) in side {
        if *blk == j + 1 {
            let last = *v.last().expect("inside a block");
            for (q2, _) in wa.successors(*q, j) {
                let mut v2 = v.clone();
                *v2.last_mut().expect("inside a block") = ctx.step(j, last, *q, q2);
                next.push((q2, j + 1, v2));
            }
        } else if *blk == j {
            let x0 = ctx.start(j, *q);
            for (q2, _) in wa.successors(*q, j) {
                let mut v2 = v.clone();
                v2.push(ctx.step(j, x0, *q, q2));
                next.push((q2, j + 1, v2));
            }
        }
    }
    prune(next)
}

fn side_degrees(inst: &PlusInstance, side: &BTreeSet<Entry>) -> Vec<RhoVector> {
    let m = inst.num_blocks();
    let wa = &inst.query.automaton;
    maximal(side.iter().filter(|(q, b, _)| *b == m && wa.is_final(*q)).map(|(_, _, v)| v.clone()))
}

/// Deterministic automaton over `b₁…b_m` whose states know `d_s` and
/// `d_{s'}` of every word leading to them. States where `s` has no
/// remaining path are dropped.
#[derive(Debug, Clone)]
pub struct DegreeDfa {
    pub alphabet: Vec<String>,
    pub delta: Vec<Vec<Option<usize>>>,
    pub d_s: Vec<Vec<RhoVector>>,
    pub d_s_prime: Vec<Vec<RhoVector>>,
}

impl DegreeDfa {
    pub fn new(inst: &PlusInstance, ctx: &BlockContext) -> Result<DegreeDfa> {
        let m = inst.num_blocks();
        let init: BTreeSet<Entry> = BTreeSet::from([(inst.query.s, 0, Vec::new())]);
        let init_p: BTreeSet<Entry> = BTreeSet::from([(inst.query.s_prime, 0, Vec::new())]);
        let mut index: HashMap<(BTreeSet<Entry>, BTreeSet<Entry>), usize> = HashMap::new();
        let mut states = vec![(init, init_p)];
        index.insert(states[0].clone(), 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let mut row = vec![None; m];
            for (j, slot) in row.iter_mut().enumerate() {
                let a = side_step(inst, ctx, &states[i].0, j);
                if a.is_empty() {
                    continue;
                }
                let b = side_step(inst, ctx, &states[i].1, j);
                let key = (a, b);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= MAX_DEGREE_STATES {
                            return Err(Error::Resource(format!(
                                "degree automaton exceeds {MAX_DEGREE_STATES} states"
                            )));
                        }
                        index.insert(key.clone(), states.len());
                        states.push(key);
                        states.len() - 1
                    }
                };
                *slot = Some(id);
            }
            delta.push(row);
            i += 1;
        }
        let d_s = states.iter().map(|(a, _)| side_degrees(inst, a)).collect();
        let d_s_prime = states.iter().map(|(_, b)| side_degrees(inst, b)).collect();
        Ok(DegreeDfa { alphabet: inst.query.automaton.alphabet().to_vec(), delta, d_s, d_s_prime })
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    /// State reached on `b₁^{n₁}⋯b_m^{n_m}`.
    pub fn run(&self, lengths: &[u64]) -> Option<usize> {
        let mut q = 0;
        for (j, &n) in lengths.iter().enumerate() {
            for _ in 0..n {
                q = self.delta[q][j]?;
            }
        }
        Some(q)
    }

    /// Realized `(X, Y)` pairs (`X ∈ d_s`, `Y = d_{s'}`) and the states
    /// realizing them.
    pub fn realized(&self) -> BTreeMap<(RhoVector, Vec<RhoVector>), Vec<usize>> {
        let mut out: BTreeMap<(RhoVector, Vec<RhoVector>), Vec<usize>> = BTreeMap::new();
        for q in 0..self.num_states() {
            for x in &self.d_s[q] {
                out.entry((x.clone(), self.d_s_prime[q].clone())).or_default().push(q);
            }
        }
        out
    }

    /// Automaton for `{b^{n⃗} : X ∈ d_s(n⃗) ∧ d_{s'}(n⃗) = Y}`.
    pub fn detector(&self, x: &[PairIdx], y: &[RhoVector]) -> Nfa {
        let finals =
            (0..self.num_states()).map(|q| self.d_s[q].iter().any(|v| v == x) && self.d_s_prime[q] == y).collect();
        Dfa { alphabet: self.alphabet.clone(), delta: self.delta.clone(), start: 0, finals }.to_nfa()
    }
}

/// Convenience wrapper: detector automaton for one `(X, Y)` pair.
pub fn detector(inst: &PlusInstance, x: &[PairIdx], y: &[RhoVector]) -> Result<Nfa> {
    let ctx = BlockContext::new(inst);
    Ok(DegreeDfa::new(inst, &ctx)?.detector(x, y))
}
