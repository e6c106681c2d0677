//! Characteristic polynomials, exact spectral radii, the SCC DAG and the
//! `(ρ, k)`-annotated automaton with its degree languages.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebraic::{AlgebraicJson, AlgebraicNumber, RhoK};
use crate::automaton::{Matrix, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::graph;
use crate::nfa::Nfa;
use crate::poly::Poly;
use crate::rational::Rational;

/// Monic characteristic polynomial `det(xI − A)`, coefficients from the
/// constant term upwards. Faddeev–LeVerrier on the integer matrix `D·A`
/// (`D` the lcm of denominators), where every division is exact.
pub fn charpoly(a: &Matrix) -> Vec<Rational> {
    let n = a.len();
    if n == 0 {
        return vec![Rational::one()];
    }
    let d = a.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let b: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect())
        .collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = B·M_{k-1} + c_{n-k+1}·I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if b[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !m[l][j].is_zero() {
                        next[i][j] += &b[i][l] * &m[l][j];
                    }
                }
            }
            next[i][i] += &c[n - k + 1];
        }
        m = next;
        // c_{n-k} = -tr(B·M_k)/k
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &b[i][l] * &m[l][i];
            }
        }
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = -q;
    }
    // det(xI − B/D) = D^{-n}·p_B(Dx)
    let dr = Rational::from_integer(d);
    let mut scale = Rational::one() / num_traits::pow(dr.clone(), n);
    let mut out = Vec::with_capacity(n + 1);
    for ci in c {
        out.push(Rational::from_integer(ci) * &scale);
        scale *= &dr;
    }
    out
}

/// Largest real root of the characteristic polynomial; for a non-negative
/// matrix this is its spectral radius.
pub fn spectral_radius(a: &Matrix) -> AlgebraicNumber {
    if a.iter().flatten().all(Zero::is_zero) {
        return AlgebraicNumber::zero();
    }
    let p = Poly::from_rationals(&charpoly(a));
    AlgebraicNumber::largest_root_at_least(&p, &Rational::zero()).unwrap_or_else(AlgebraicNumber::zero)
}

/// One strongly connected component.
#[derive(Debug, Clone)]
pub struct SccInfo {
    pub members: Vec<usize>,
    pub radius: AlgebraicNumber,
    /// Gcd of cycle lengths; 0 when the component has no internal edge.
    pub period: u64,
}

/// DAG of strongly connected components of a non-negative matrix.
#[derive(Debug, Clone)]
pub struct SccDag {
    /// Reverse topological order (sinks first).
    pub sccs: Vec<SccInfo>,
    pub comp_of: Vec<usize>,
    /// `(from, to)` component pairs joined by some positive entry.
    pub edges: Vec<(usize, usize)>,
}

fn adjacency(m: &Matrix) -> Vec<Vec<usize>> {
    m.iter()
        .map(|row| row.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(j, _)| j).collect())
        .collect()
}

/// SCC DAG of a single matrix.
pub fn scc_decompose_matrix(m: &Matrix) -> SccDag {
    let adj = adjacency(m);
    let sccs = graph::tarjan(&adj);
    let mut infos = Vec::with_capacity(sccs.components.len());
    for members in &sccs.components {
        let period = graph::period(&adj, &sccs.comp_of, members);
        let radius = if period == 0 {
            AlgebraicNumber::zero()
        } else {
            let sub: Matrix = members
                .iter()
                .map(|&i| members.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            spectral_radius(&sub)
        };
        infos.push(SccInfo { members: members.clone(), radius, period });
    }
    let mut edges = Vec::new();
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            let (cu, cv) = (sccs.comp_of[u], sccs.comp_of[v]);
            if cu != cv {
                edges.push((cu, cv));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    SccDag { sccs: infos, comp_of: sccs.comp_of, edges }
}

/// SCC DAG of the automaton's total transition matrix.
pub fn scc_decompose(wa: &WeightedAutomaton) -> SccDag {
    scc_decompose_matrix(&wa.total_matrix())
}

/// Local period between two states: lcm over DAG paths of the gcd of the
/// periods of the non-trivial SCCs on the path (0 when no path exists,
/// 1 when the path crosses no cycle). Only used for diagnostics and tests.
pub fn local_period(dag: &SccDag, from: usize, to: usize) -> u64 {
    let (cf, ct) = (dag.comp_of[from], dag.comp_of[to]);
    let n = dag.sccs.len();
    let mut succ = vec![Vec::new(); n];
    for &(u, v) in &dag.edges {
        succ[u].push(v);
    }
    // memo[c] = set of gcd values over paths c ⇝ ct (gcd 0 = no cycle yet)
    fn walk(c: usize, ct: usize, dag: &SccDag, succ: &[Vec<usize>], memo: &mut HashMap<usize, Vec<u64>>) -> Vec<u64> {
        if let Some(v) = memo.get(&c) {
            return v.clone();
        }
        let own = dag.sccs[c].period;
        let mut out = Vec::new();
        if c == ct {
            out.push(own);
        } else {
            for &d in &succ[c] {
                for g in walk(d, ct, dag, succ, memo) {
                    out.push(own.gcd(&g));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        memo.insert(c, out.clone());
        out
    }
    let gs = walk(cf, ct, dag, &succ, &mut HashMap::new());
    if gs.is_empty() {
        return 0;
    }
    gs.iter().map(|&g| g.max(1)).fold(1, |acc, g| acc.lcm(&g))
}

/// Ascending table of distinct radii.
#[derive(Debug, Clone, Default)]
pub struct RadiusTable {
    pub values: Vec<AlgebraicNumber>,
}

impl RadiusTable {
    pub fn new(mut values: Vec<AlgebraicNumber>) -> RadiusTable {
        values.push(AlgebraicNumber::zero());
        values.sort();
        values.dedup();
        RadiusTable { values }
    }

    pub fn index_of(&self, r: &AlgebraicNumber) -> usize {
        self.values.binary_search(r).expect("radius present in table")
    }

    pub fn get(&self, i: usize) -> &AlgebraicNumber {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A `(ρ, k)` annotation with `ρ` given as an index into a [`RadiusTable`];
/// the derived order is the lexicographic order on pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PairIdx {
    pub rho: usize,
    pub k: usize,
}

/// Reachable part of the annotated automaton from a single source,
/// presented as an NFA whose states carry `(q, ρ, k)` labels.
#[derive(Debug, Clone)]
pub struct AnnotatedAutomaton {
    pub nfa: Nfa,
    /// `labels[i] = (q, annotation)` for NFA state `i`.
    pub labels: Vec<(usize, PairIdx)>,
    pub radii: RadiusTable,
    pub final_state: usize,
}

/// Per-state SCC and radius index, shared by all annotations of one automaton.
#[derive(Debug, Clone)]
pub struct SccContext {
    pub dag: SccDag,
    pub radii: RadiusTable,
    /// Radius index of each state's SCC.
    pub rho_of: Vec<usize>,
}

impl SccContext {
    pub fn new(m: &Matrix) -> SccContext {
        let dag = scc_decompose_matrix(m);
        let radii = RadiusTable::new(dag.sccs.iter().map(|s| s.radius.clone()).collect());
        let rho_of = dag.comp_of.iter().map(|&c| radii.index_of(&dag.sccs[c].radius)).collect();
        SccContext { dag, radii, rho_of }
    }

    pub fn same_scc(&self, q: usize, q2: usize) -> bool {
        self.dag.comp_of[q] == self.dag.comp_of[q2]
    }

    /// Annotation after taking the transition `q → q2` from annotation `x`.
    pub fn step(&self, x: PairIdx, q: usize, q2: usize) -> PairIdx {
        if self.same_scc(q, q2) {
            return x;
        }
        let r2 = self.rho_of[q2];
        match r2.cmp(&x.rho) {
            std::cmp::Ordering::Equal => PairIdx { rho: x.rho, k: x.k + 1 },
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Greater => PairIdx { rho: r2, k: 0 },
        }
    }

    pub fn initial(&self, s: usize) -> PairIdx {
        PairIdx { rho: self.rho_of[s], k: 0 }
    }

    pub fn to_rhok(&self, x: PairIdx) -> RhoK {
        RhoK::new(self.radii.get(x.rho).clone(), x.k)
    }

    pub fn from_rhok(&self, x: &RhoK) -> Option<PairIdx> {
        self.radii.values.binary_search(&x.rho).ok().map(|rho| PairIdx { rho, k: x.k })
    }
}

/// Builds the annotated automaton of `wa` (which must have a unique final
/// state without outgoing transitions) from `s`.
pub fn annotate(wa: &WeightedAutomaton, s: usize) -> Result<AnnotatedAutomaton> {
    let ctx = SccContext::new(&wa.total_matrix());
    annotate_with(wa, &ctx, s)
}

pub fn annotate_with(wa: &WeightedAutomaton, ctx: &SccContext, s: usize) -> Result<AnnotatedAutomaton> {
    let t = wa
        .single_final()
        .ok_or_else(|| Error::NotApplicable("annotation needs a unique final state without outgoing transitions".into()))?;
    let mut index: HashMap<(usize, PairIdx), usize> = HashMap::new();
    let mut labels = vec![(s, ctx.initial(s))];
    index.insert(labels[0], 0);
    let mut nfa = Nfa::new(1, wa.alphabet().to_vec(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (q, x) = labels[i];
        nfa.set_final(i, q == t);
        for a in 0..wa.num_symbols() {
            for (q2, _) in wa.successors(q, a) {
                let key = (q2, ctx.step(x, q, q2));
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = nfa.add_state();
                        index.insert(key, j);
                        labels.push(key);
                        queue.push_back(j);
                        j
                    }
                };
                nfa.add_transition(i, a, j);
            }
        }
    }
    Ok(AnnotatedAutomaton { nfa, labels, radii: ctx.radii.clone(), final_state: t })
}

/// Acceptance threshold for [`degree_language`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    Geq,
    Gt,
}

impl AnnotatedAutomaton {
    /// Annotations carried by reachable final states, ascending.
    pub fn admissible(&self) -> Vec<PairIdx> {
        let mut v: Vec<PairIdx> =
            self.labels.iter().filter(|(q, _)| *q == self.final_state).map(|&(_, x)| x).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn admissible_rhok(&self) -> Vec<RhoK> {
        self.admissible().into_iter().map(|x| RhoK::new(self.radii.get(x.rho).clone(), x.k)).collect()
    }

    /// NFA over annotation indices (no admissibility check).
    pub fn degree_language_idx(&self, x: PairIdx, mode: DegreeMode) -> Nfa {
        let mut n = self.nfa.clone();
        for (i, &(q, y)) in self.labels.iter().enumerate() {
            let ok = match mode {
                DegreeMode::Geq => y >= x,
                DegreeMode::Gt => y > x,
            };
            n.set_final(i, q == self.final_state && ok);
        }
        n
    }

    /// JSON debug dump of the admissible-pair table.
    pub fn dump(&self) -> AnnotationDump {
        AnnotationDump {
            radii: self.radii.values.iter().map(AlgebraicNumber::to_json).collect(),
            states: self
                .labels
                .iter()
                .map(|&(q, x)| AnnotatedStateJson { state: q, rho: x.rho, k: x.k })
                .collect(),
            admissible: self.admissible(),
        }
    }
}

/// `{w : some path of w ends at the final state with annotation ≥ x}` (or `> x`).
pub fn degree_language(ann: &AnnotatedAutomaton, x: &RhoK, mode: DegreeMode) -> Result<Nfa> {
    let idx = ann
        .radii
        .values
        .binary_search(&x.rho)
        .ok()
        .map(|rho| PairIdx { rho, k: x.k })
        .filter(|p| ann.admissible().contains(p))
        .ok_or_else(|| Error::InvalidInput(format!("pair {x} is not admissible")))?;
    Ok(ann.degree_language_idx(idx, mode))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnotatedStateJson {
    pub state: usize,
    pub rho: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnotationDump {
    pub radii: Vec<AlgebraicJson>,
    pub states: Vec<AnnotatedStateJson>,
    pub admissible: Vec<PairIdx>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use std::cmp::Ordering;

    fn m(rows: &[&[(i64, i64)]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect()).collect()
    }

    #[test]
    fn local_period_takes_lcm_over_paths() {
        // 0 → (1 ↔ 2) → 6 and 0 → (3 → 4 → 5 → 3) → 6
        let mut a: Matrix = vec![vec![rat(0, 1); 7]; 7];
        for (i, j) in [(0, 1), (1, 2), (2, 1), (0, 3), (3, 4), (4, 5), (5, 3), (2, 6), (5, 6)] {
            a[i][j] = rat(1, 2);
        }
        let dag = scc_decompose_matrix(&a);
        assert_eq!(local_period(&dag, 0, 6), 6);
        assert_eq!(local_period(&dag, 1, 6), 2);
        assert_eq!(local_period(&dag, 3, 5), 3);
        assert_eq!(local_period(&dag, 0, 0), 1);
        assert_eq!(local_period(&dag, 6, 0), 0);
    }

    #[test]
    fn charpoly_of_fibonacci_matrix() {
        let a = m(&[&[(1, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert_eq!(charpoly(&a), vec![int(-1), int(-1), int(1)]);
        let r = spectral_radius(&a);
        assert!((r.to_f64() - 1.618_033_988_749_895).abs() < 1e-9);
        assert_eq!(r.cmp_rational(&int(1)), Ordering::Greater);
        assert_eq!(r.cmp_rational(&int(2)), Ordering::Less);
    }

    #[test]
    fn radius_of_scalar_and_nilpotent() {
        assert_eq!(spectral_radius(&m(&[&[(1, 2)]])).as_rational(), Some(&rat(1, 2)));
        let nil = m(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]);
        assert!(spectral_radius(&nil).is_zero());
    }

    #[test]
    fn radius_of_period_two_block() {
        // p1 -> p2 (1), p2 -> p1 (1/4): radius 1/2
        let a = m(&[&[(0, 1), (1, 1)], &[(1, 4), (0, 1)]]);
        assert_eq!(spectral_radius(&a).as_rational(), Some(&rat(1, 2)));
        let dag = scc_decompose_matrix(&a);
        assert_eq!(dag.sccs.len(), 1);
        assert_eq!(dag.sccs[0].period, 2);
    }
}
