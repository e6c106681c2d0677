//! Weighted automata over non-negative rationals, labelled Markov chains and
//! probabilistic automata.
//!
//! States and symbols carry string ids externally and dense indices
//! internally. Transition matrices are dense; every instance handled by the
//! deciders is small enough that sparsity buys nothing.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::nfa::Nfa;
use crate::rational::{format_rational, Rational};

pub type Matrix = Vec<Vec<Rational>>;

pub fn zero_matrix(n: usize) -> Matrix {
    vec![vec![Rational::zero(); n]; n]
}

pub fn identity_matrix(n: usize) -> Matrix {
    let mut m = zero_matrix(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rational::zero(); p]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..p {
                if !b[k][j].is_zero() {
                    out[i][j] += aik * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn mat_add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_pow(m: &Matrix, mut e: u64) -> Matrix {
    let mut base = m.clone();
    let mut acc = identity_matrix(m.len());
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// Row vector times matrix.
pub fn vec_mul(v: &[Rational], m: &Matrix) -> Vec<Rational> {
    let n = m.first().map_or(0, Vec::len);
    let mut out = vec![Rational::zero(); n];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, mij) in m[i].iter().enumerate() {
            if !mij.is_zero() {
                out[j] += vi * mij;
            }
        }
    }
    out
}

/// A weighted automaton `(Q, Σ, M, F)` with non-negative rational weights.
#[derive(Clone)]
pub struct WeightedAutomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    trans: Vec<Matrix>,
    finals: Vec<bool>,
    state_index: HashMap<String, usize>,
    symbol_index: HashMap<String, usize>,
}

impl PartialEq for WeightedAutomaton {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.alphabet == other.alphabet
            && self.trans == other.trans
            && self.finals == other.finals
    }
}

impl Eq for WeightedAutomaton {}

impl fmt::Debug for WeightedAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "WeightedAutomaton {{")?;
        writeln!(f, "  states: {:?}", self.states)?;
        writeln!(f, "  alphabet: {:?}", self.alphabet)?;
        let finals: Vec<&str> = self.final_states().map(|q| self.states[q].as_str()).collect();
        writeln!(f, "  finals: {finals:?}")?;
        for (q, a, q2, w) in self.transitions() {
            writeln!(
                f,
                "  {} --{}:{}--> {}",
                self.states[q],
                self.alphabet[a],
                format_rational(&w),
                self.states[q2]
            )?;
        }
        write!(f, "}}")
    }
}

impl WeightedAutomaton {
    /// Automaton with the given states and symbols, no transitions and no
    /// final states. Ids must be distinct.
    pub fn new<S: AsRef<str>, T: AsRef<str>>(states: &[S], alphabet: &[T]) -> Result<Self> {
        let mut wa = WeightedAutomaton {
            states: Vec::new(),
            alphabet: Vec::new(),
            trans: Vec::new(),
            finals: Vec::new(),
            state_index: HashMap::new(),
            symbol_index: HashMap::new(),
        };
        for a in alphabet {
            wa.add_symbol(a.as_ref())?;
        }
        for q in states {
            wa.add_state(q.as_ref())?;
        }
        Ok(wa)
    }

    /// Convenience constructor from `(from, symbol, to, weight)` tuples.
    pub fn from_transitions<S: AsRef<str>>(
        states: &[S],
        alphabet: &[S],
        finals: &[S],
        transitions: &[(&str, &str, &str, Rational)],
    ) -> Result<Self> {
        let mut wa = Self::new(states, alphabet)?;
        for f in finals {
            let q = wa.state(f.as_ref())?;
            wa.set_final(q, true);
        }
        for (from, sym, to, w) in transitions {
            let (q, a, q2) = (wa.state(from)?, wa.symbol(sym)?, wa.state(to)?);
            wa.set_weight(q, a, q2, w.clone())?;
        }
        Ok(wa)
    }

    pub fn add_state(&mut self, id: &str) -> Result<usize> {
        if self.state_index.contains_key(id) {
            return Err(Error::InvalidInput(format!("duplicate state `{id}`")));
        }
        let idx = self.states.len();
        self.states.push(id.to_string());
        self.state_index.insert(id.to_string(), idx);
        self.finals.push(false);
        for m in &mut self.trans {
            for row in m.iter_mut() {
                row.push(Rational::zero());
            }
            m.push(vec![Rational::zero(); idx + 1]);
        }
        Ok(idx)
    }

    pub fn add_symbol(&mut self, id: &str) -> Result<usize> {
        if self.symbol_index.contains_key(id) {
            return Err(Error::InvalidInput(format!("duplicate symbol `{id}`")));
        }
        let idx = self.alphabet.len();
        self.alphabet.push(id.to_string());
        self.symbol_index.insert(id.to_string(), idx);
        self.trans.push(zero_matrix(self.states.len()));
        Ok(idx)
    }

    /// A state id not yet used, derived from `base`.
    pub fn fresh_state_name(&self, base: &str) -> String {
        if !self.state_index.contains_key(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}#{i}"))
            .find(|n| !self.state_index.contains_key(n))
            .expect("unbounded search")
    }

    pub fn set_weight(&mut self, q: usize, a: usize, q2: usize, w: Rational) -> Result<()> {
        if w.is_negative() {
            return Err(Error::InvalidInput(format!(
                "negative weight {} on {} --{}--> {}",
                format_rational(&w),
                self.states[q],
                self.alphabet[a],
                self.states[q2]
            )));
        }
        self.trans[a][q][q2] = w;
        Ok(())
    }

    pub fn set_final(&mut self, q: usize, is_final: bool) {
        self.finals[q] = is_final;
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn symbol_name(&self, a: usize) -> &str {
        &self.alphabet[a]
    }

    /// Index of a state id.
    pub fn state(&self, id: &str) -> Result<usize> {
        self.state_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    }

    /// Index of a symbol id.
    pub fn symbol(&self, id: &str) -> Result<usize> {
        self.symbol_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(id.to_string()))
    }

    pub fn matrix(&self, a: usize) -> &Matrix {
        &self.trans[a]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.trans
    }

    pub fn weight_of(&self, q: usize, a: usize, q2: usize) -> &Rational {
        &self.trans[a][q][q2]
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn final_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&q| self.finals[q])
    }

    /// All positive-weight transitions `(q, a, q', w)` in index order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize, Rational)> + '_ {
        let n = self.states.len();
        (0..n).flat_map(move |q| {
            (0..self.alphabet.len()).flat_map(move |a| {
                (0..n).filter_map(move |q2| {
                    let w = &self.trans[a][q][q2];
                    (!w.is_zero()).then(|| (q, a, q2, w.clone()))
                })
            })
        })
    }

    /// Positive successors of `q` on symbol `a`.
    pub fn successors(&self, q: usize, a: usize) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.trans[a][q]
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
    }

    /// True when `q` has no positive outgoing transition.
    pub fn has_no_outgoing(&self, q: usize) -> bool {
        self.trans.iter().all(|m| m[q].iter().all(Zero::is_zero))
    }

    /// `Σ_a M(a)`.
    pub fn total_matrix(&self) -> Matrix {
        let n = self.states.len();
        self.trans.iter().fold(zero_matrix(n), |acc, m| mat_add(&acc, m))
    }

    /// Smallest positive weight, if any transition exists.
    pub fn min_positive_weight(&self) -> Option<Rational> {
        self.transitions().map(|t| t.3).min()
    }

    /// Parses a word: symbols separated by whitespace, or, when every symbol
    /// is a single character and the text has no whitespace, one symbol per
    /// character.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Vec::new());
        }
        if trimmed.contains(char::is_whitespace) || !self.alphabet.iter().all(|a| a.chars().count() == 1) {
            trimmed.split_whitespace().map(|t| self.symbol(t)).collect()
        } else {
            trimmed.chars().map(|c| self.symbol(&c.to_string())).collect()
        }
    }

    /// Renders a word using the same convention as [`Self::parse_word`].
    pub fn format_word(&self, w: &[usize]) -> String {
        if self.alphabet.iter().all(|a| a.chars().count() == 1) {
            w.iter().map(|&a| self.alphabet[a].as_str()).collect()
        } else {
            w.iter().map(|&a| self.alphabet[a].as_str()).collect::<Vec<_>>().join(" ")
        }
    }

    /// Row vector of weights reached from `s` after reading `w`.
    pub fn reach_vector(&self, s: usize, w: &[usize]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.states.len()];
        v[s] = Rational::one();
        for &a in w {
            v = vec_mul(&v, &self.trans[a]);
        }
        v
    }

    /// Sum of the entries of `v` at final states.
    pub fn final_mass(&self, v: &[Rational]) -> Rational {
        v.iter()
            .zip(&self.finals)
            .filter(|(_, f)| **f)
            .fold(Rational::zero(), |acc, (x, _)| acc + x)
    }

    /// `ν_s(w) = Σ_{t∈F} (M(a₁)⋯M(a_n))_{s,t}`; `ν_s(ε) = [s ∈ F]`.
    pub fn weight(&self, s: usize, w: &[usize]) -> Rational {
        self.final_mass(&self.reach_vector(s, w))
    }

    /// [`Self::weight`] on string ids.
    pub fn weight_named(&self, s: &str, w: &[&str]) -> Result<Rational> {
        let s = self.state(s)?;
        let w: Vec<usize> = w.iter().map(|a| self.symbol(a)).collect::<Result<_>>()?;
        Ok(self.weight(s, &w))
    }

    /// Single final state `t` without outgoing transitions; weights of
    /// non-empty words are preserved for every original state. The empty
    /// word is the one exception: only `t` accepts it afterwards.
    pub fn normalize_single_final(&self) -> WeightedAutomaton {
        let finals: Vec<usize> = self.final_states().collect();
        if finals.len() == 1 && self.has_no_outgoing(finals[0]) {
            return self.clone();
        }
        let mut out = self.clone();
        let name = out.fresh_state_name("t");
        let t = out.add_state(&name).expect("fresh name");
        for a in 0..out.alphabet.len() {
            for q in 0..self.states.len() {
                let mass = finals
                    .iter()
                    .fold(Rational::zero(), |acc, &f| acc + &self.trans[a][q][f]);
                out.trans[a][q][t] = mass;
            }
        }
        for q in 0..out.states.len() {
            out.finals[q] = q == t;
        }
        out
    }

    /// Index of the unique final state if the automaton is normalized.
    pub fn single_final(&self) -> Option<usize> {
        let finals: Vec<usize> = self.final_states().collect();
        (finals.len() == 1 && self.has_no_outgoing(finals[0])).then(|| finals[0])
    }

    /// Adds a copy of `q` with the same outgoing row and finality but no
    /// incoming transitions; returns its index.
    pub fn add_source_copy(&mut self, q: usize, name_hint: &str) -> usize {
        let name = self.fresh_state_name(name_hint);
        let c = self.add_state(&name).expect("fresh name");
        for a in 0..self.alphabet.len() {
            let row = self.trans[a][q].clone();
            self.trans[a][c] = row;
        }
        self.finals[c] = self.finals[q];
        c
    }

    /// True when some state has a positive transition into `q`.
    pub fn has_incoming(&self, q: usize) -> bool {
        self.trans.iter().any(|m| m.iter().any(|row| !row[q].is_zero()))
    }

    /// `{w : ν_s(w) > 0}` as an NFA.
    pub fn nfa_of(&self, s: usize) -> Nfa {
        let n = self.states.len();
        let mut nfa = Nfa::new(n, self.alphabet.clone(), s);
        for (q, a, q2, _) in self.transitions() {
            nfa.add_transition(q, a, q2);
        }
        for q in 0..n {
            nfa.set_final(q, self.finals[q]);
        }
        nfa
    }

    /// Same automaton restricted to `keep` (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> WeightedAutomaton {
        let names: Vec<&str> = keep.iter().map(|&q| self.states[q].as_str()).collect();
        let mut out = WeightedAutomaton::new(&names, &self.alphabet).expect("distinct ids");
        for (i, &q) in keep.iter().enumerate() {
            out.finals[i] = self.finals[q];
            for a in 0..self.alphabet.len() {
                for (j, &q2) in keep.iter().enumerate() {
                    out.trans[a][i][j] = self.trans[a][q][q2].clone();
                }
            }
        }
        out
    }

    /// States reachable from `from` through positive transitions.
    pub fn reachable_from(&self, from: &[usize]) -> Vec<bool> {
        let n = self.states.len();
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = from.to_vec();
        for &q in from {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for a in 0..self.alphabet.len() {
                for (q2, _) in self.successors(q, a) {
                    if !seen[q2] {
                        seen[q2] = true;
                        stack.push(q2);
                    }
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.states.len();
        let mut seen = self.finals.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if seen[q] {
                    continue;
                }
                if (0..self.alphabet.len()).any(|a| self.successors(q, a).any(|(q2, _)| seen[q2])) {
                    seen[q] = true;
                    changed = true;
                }
            }
        }
        seen
    }

    /// Multiplies every weight by `c > 0`.
    pub fn scaled(&self, c: &Rational) -> WeightedAutomaton {
        let mut out = self.clone();
        for m in &mut out.trans {
            for row in m.iter_mut() {
                for w in row.iter_mut() {
                    *w *= c;
                }
            }
        }
        out
    }
}

/// "Is `s` big-O of `s'`?" on a fixed automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub automaton: WeightedAutomaton,
    pub s: usize,
    pub s_prime: usize,
}

impl Query {
    pub fn new(automaton: WeightedAutomaton, s: usize, s_prime: usize) -> Result<Self> {
        let n = automaton.num_states();
        if s >= n || s_prime >= n {
            return Err(Error::InvalidInput("query state index out of range".into()));
        }
        Ok(Query { automaton, s, s_prime })
    }

    pub fn named(automaton: WeightedAutomaton, s: &str, s_prime: &str) -> Result<Self> {
        let (s, sp) = (automaton.state(s)?, automaton.state(s_prime)?);
        Ok(Query { automaton, s, s_prime: sp })
    }

    /// The query with the roles of `s` and `s'` exchanged.
    pub fn swapped(&self) -> Query {
        Query { automaton: self.automaton.clone(), s: self.s_prime, s_prime: self.s }
    }
}

/// `ν_s(w)/ν_{s'}(w)` with `0/0 = 0` and `x/0 = ∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ratio {
    Finite(Rational),
    Infinite,
}

impl Ratio {
    pub fn of(num: &Rational, den: &Rational) -> Ratio {
        if den.is_zero() {
            if num.is_zero() {
                Ratio::Finite(Rational::zero())
            } else {
                Ratio::Infinite
            }
        } else {
            Ratio::Finite(num / den)
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ratio::Finite(r) => Some(r),
            Ratio::Infinite => None,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(r) => write!(f, "{}", format_rational(r)),
            Ratio::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioEntry {
    pub word: Vec<usize>,
    pub weight_s: Rational,
    pub weight_s_prime: Rational,
}

impl RatioEntry {
    pub fn ratio(&self) -> Ratio {
        Ratio::of(&self.weight_s, &self.weight_s_prime)
    }
}

/// Exhaustive ratio table up to a length bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioProfile {
    /// Words with positive weight from `s` or `s'`, by length then lexicographically.
    pub entries: Vec<RatioEntry>,
    pub max_ratio: Ratio,
    /// First word attaining `max_ratio` in enumeration order.
    pub argmax: Option<Vec<usize>>,
}

/// Default cap on the number of enumerated words in [`ratio_profile`].
pub const DEFAULT_WORD_CAP: u128 = 1 << 22;

/// Enumerates all words up to `max_len` and records their weights from
/// `s` and `s'`. Fails with a resource error when `Σ_{n≤max_len} |Σ|^n`
/// exceeds `cap`.
pub fn ratio_profile(q: &Query, max_len: usize, cap: u128) -> Result<RatioProfile> {
    let wa = &q.automaton;
    let k = wa.num_symbols() as u128;
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(level);
        if total > cap {
            return Err(Error::Resource(format!(
                "{} words up to length {max_len} exceed the cap of {cap}",
                if k <= 1 { (max_len + 1).to_string() } else { format!("more than {cap}") }
            )));
        }
        level = level.saturating_mul(k);
    }
    let n = wa.num_states();
    let unit = |s: usize| {
        let mut v = vec![Rational::zero(); n];
        v[s] = Rational::one();
        v
    };
    let mut frontier: Vec<(Vec<usize>, Vec<Rational>, Vec<Rational>)> =
        vec![(Vec::new(), unit(q.s), unit(q.s_prime))];
    let mut entries = Vec::new();
    let mut best = Ratio::Finite(Rational::zero());
    let mut argmax = None;
    for len in 0..=max_len {
        let mut next = Vec::new();
        for (word, vs, vsp) in frontier {
            let ws = wa.final_mass(&vs);
            let wsp = wa.final_mass(&vsp);
            if !ws.is_zero() || !wsp.is_zero() {
                let e = RatioEntry { word: word.clone(), weight_s: ws, weight_s_prime: wsp };
                let r = e.ratio();
                if argmax.is_none() || r > best {
                    best = r;
                    argmax = Some(word.clone());
                }
                entries.push(e);
            }
            if len == max_len {
                continue;
            }
            let dead = vs.iter().all(Zero::is_zero) && vsp.iter().all(Zero::is_zero);
            if dead {
                continue;
            }
            for a in 0..wa.num_symbols() {
                let mut w2 = word.clone();
                w2.push(a);
                next.push((w2, vec_mul(&vs, wa.matrix(a)), vec_mul(&vsp, wa.matrix(a))));
            }
        }
        frontier = next;
    }
    Ok(RatioProfile { entries, max_ratio: best, argmax })
}

/// A row whose outgoing mass violates a stochasticity requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub state: String,
    /// Symbol for per-symbol (probabilistic automaton) rows.
    pub symbol: Option<String>,
    pub expected: Rational,
    pub actual: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.symbol {
            Some(a) => write!(
                f,
                "row of state `{}` on `{a}` sums to {} (expected {})",
                self.state,
                format_rational(&self.actual),
                format_rational(&self.expected)
            ),
            None => write!(
                f,
                "outgoing mass of state `{}` is {} (expected {})",
                self.state,
                format_rational(&self.actual),
                format_rational(&self.expected)
            ),
        }
    }
}

/// Checks the labelled-Markov-chain conditions exactly: non-final rows sum
/// to 1 over all symbols and final rows are zero.
pub fn validate_lmc(wa: &WeightedAutomaton) -> std::result::Result<(), Box<Violation>> {
    for q in 0..wa.num_states() {
        let mass = (0..wa.num_symbols())
            .flat_map(|a| wa.matrix(a)[q].iter())
            .fold(Rational::zero(), |acc, w| acc + w);
        let expected = if wa.is_final(q) { Rational::zero() } else { Rational::one() };
        if mass != expected {
            return Err(Box::new(Violation { state: wa.state_name(q).to_string(), symbol: None, expected, actual: mass }));
        }
    }
    Ok(())
}

/// Checks that every `M(a)` is row-stochastic and that `start` exists.
pub fn validate_pa(wa: &WeightedAutomaton, start: usize) -> std::result::Result<(), Box<Violation>> {
    if start >= wa.num_states() {
        return Err(Box::new(Violation {
            state: format!("#{start}"),
            symbol: None,
            expected: Rational::one(),
            actual: Rational::zero(),
        }));
    }
    for q in 0..wa.num_states() {
        for a in 0..wa.num_symbols() {
            let mass = wa.matrix(a)[q].iter().fold(Rational::zero(), |acc, w| acc + w);
            if !mass.is_one() {
                return Err(Box::new(Violation {
                    state: wa.state_name(q).to_string(),
                    symbol: Some(wa.symbol_name(a).to_string()),
                    expected: Rational::one(),
                    actual: mass,
                }));
            }
        }
    }
    Ok(())
}

/// A weighted automaton that passed [`validate_lmc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lmc(WeightedAutomaton);

impl Lmc {
    pub fn new(wa: WeightedAutomaton) -> Result<Self> {
        validate_lmc(&wa).map_err(|v| Error::InvalidInput(format!("not a labelled Markov chain: {v}")))?;
        Ok(Lmc(wa))
    }

    pub fn automaton(&self) -> &WeightedAutomaton {
        &self.0
    }

    pub fn into_inner(self) -> WeightedAutomaton {
        self.0
    }
}

/// A probabilistic automaton: stochastic `M(a)` for every `a`, plus a start state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbAutomaton {
    pub automaton: WeightedAutomaton,
    pub start: usize,
}

impl ProbAutomaton {
    pub fn new(automaton: WeightedAutomaton, start: usize) -> Result<Self> {
        validate_pa(&automaton, start)
            .map_err(|v| Error::InvalidInput(format!("not a probabilistic automaton: {v}")))?;
        Ok(ProbAutomaton { automaton, start })
    }

    /// Acceptance probability `Pr(w)` from the start state.
    pub fn probability(&self, w: &[usize]) -> Rational {
        self.automaton.weight(self.start, w)
    }
}
