//! Big-O for automata whose languages are bounded.
//!
//! The query is first rewritten into plus-letter-bounded sub-queries over
//! fresh block symbols (see [`reduce`]). For each of them, every realized
//! pair of a degree vector `X` of `s` and the degree set `Y` of `s'` gives
//! a detector language; its Parikh image is a union of linear sets, and
//! each linear set with a choice of unbounded coordinates `U` gives one
//! real-exponential sentence. `s` is not big-O of `s'` iff some sentence
//! holds, which [`semi::semi_decide`] settles when it can.

pub mod ambiguous;
pub mod degree;
pub mod formula;
pub mod parikh;
pub mod reduce;
pub mod semi;

use rayon::prelude::*;

use crate::automaton::Query;
use crate::error::{Error, Result};
use crate::nfa::{lc_check, LcResult};
use crate::rational::{to_f64, Rational};
use crate::verdict::{GridPoint, Verdict, Witness};

pub use ambiguous::{decide_finitely_ambiguous, finitely_ambiguous_formula, DeltaTuple};
pub use degree::{detector, BlockContext, DegreeDfa, RhoVector};
pub use formula::{Coefficient, ExpRow, LogRatio, Provenance, RealExpFormula};
pub use parikh::{parikh_linear_sets, LinearSet};
pub use reduce::{
    bounded_to_letter_bounded, detect_letter_bounded, letter_bounded, letter_bounded_to_plus, relabel_plus_blocks,
    LetterBounded, PlusInstance,
};
pub use semi::{semi_decide, semi_decide_from, SemiOutcome};

/// Settings for [`decide_bounded`].
#[derive(Debug, Clone, Default)]
pub struct BoundedOptions {
    /// Bounding words `w₁…w_m`; when absent a letter bound is detected.
    pub words: Option<Vec<Vec<usize>>>,
    /// Worker threads for candidate evaluation; 0 or 1 means sequential.
    pub threads: usize,
    /// Starting interval precision in bits; defaults to [`semi::start_bits`].
    pub start_bits: Option<u32>,
}

/// Verdict plus the sentences that could not be settled.
#[derive(Debug, Clone)]
pub struct BoundedReport {
    pub verdict: Verdict,
    pub unresolved: Vec<RealExpFormula>,
    pub sub_queries: usize,
    pub candidates: usize,
}

/// One `(X, Y, k, U)` combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub x: RhoVector,
    pub y: Vec<RhoVector>,
    pub set: LinearSet,
    pub u: Vec<usize>,
}

/// All candidates of a plus instance, in a deterministic order.
pub fn candidates(dfa: &DegreeDfa) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (x, y) in dfa.realized().into_keys() {
        let det = dfa.detector(&x, &y);
        for set in parikh_linear_sets(&det) {
            let unb = set.unbounded();
            for mask in 1u64..(1 << unb.len()) {
                let u: Vec<usize> = (0..unb.len()).filter(|&b| mask & (1 << b) != 0).map(|b| unb[b]).collect();
                out.push(Candidate { x: x.clone(), y: y.clone(), set: set.clone(), u });
            }
        }
    }
    out
}

/// The sentence `∀C<0 ∃x ≥ B_k ⋀_{j} Σ_{i∈U} log(σ_{j,i}/ρ_i)·r_{k,i}·x_i + (ℓ_{j,i} − k_i)·log(x_i) < C`.
pub fn emit_formula(inst: &PlusInstance, ctx: &BlockContext, c: &Candidate) -> RealExpFormula {
    let lower = Rational::from_integer(c.set.base.iter().copied().max().unwrap_or(1).max(1).into());
    let rows = c
        .y
        .iter()
        .map(|yj| ExpRow {
            coeffs: c
                .u
                .iter()
                .map(|&i| Coefficient {
                    scale: c.set.periods[i],
                    log: LogRatio::new(ctx.radius(yj[i]).clone(), ctx.radius(c.x[i]).clone()),
                })
                .collect(),
            log_powers: c.u.iter().map(|&i| yj[i].k as i64 - c.x[i].k as i64).collect(),
        })
        .collect();
    RealExpFormula {
        provenance: Provenance::Bounded {
            blocks: inst.blocks.clone(),
            x: ctx.to_json(&c.x),
            y: c.y.iter().map(|v| ctx.to_json(v)).collect(),
            base: c.set.base.clone(),
            periods: c.set.periods.clone(),
            u: c.u.clone(),
        },
        vars: c.u.iter().map(|i| format!("x{}", i + 1)).collect(),
        lower,
        alternatives: vec![rows],
    }
}

#[derive(Debug, Clone)]
enum Eval {
    Holds(Witness),
    Fails,
    Unknown(Box<RealExpFormula>),
}

fn evaluate(inst: &PlusInstance, ctx: &BlockContext, c: &Candidate, bits: u32) -> Eval {
    let f = emit_formula(inst, ctx, c);
    match semi_decide_from(&f, bits) {
        SemiOutcome::Holds { grid, .. } => {
            let grid = grid
                .iter()
                .map(|p| {
                    let mut lengths = c.set.base.clone();
                    for (pos, &i) in c.u.iter().enumerate() {
                        lengths[i] = lengths[i].saturating_add(c.set.periods[i].saturating_mul(p.values[pos]));
                    }
                    GridPoint { lengths, objective_upper: to_f64(&p.objective.hi) }
                })
                .collect();
            Eval::Holds(Witness::Divergence { formula: f.to_string(), blocks: inst.blocks.clone(), grid })
        }
        SemiOutcome::Fails { .. } => Eval::Fails,
        SemiOutcome::Unknown => Eval::Unknown(Box::new(f)),
    }
}

/// Merges candidate outcomes in order: a holding sentence wins, then any
/// unsettled one, else the sub-query is big-O.
fn merge(evals: Vec<Eval>) -> (Verdict, Vec<RealExpFormula>) {
    let mut unresolved = Vec::new();
    for e in evals {
        match e {
            Eval::Holds(w) => return (Verdict::NotBigO { witness: w }, Vec::new()),
            Eval::Unknown(f) => unresolved.push(*f),
            Eval::Fails => {}
        }
    }
    if unresolved.is_empty() {
        (Verdict::IsBigO, unresolved)
    } else {
        (Verdict::Unknown { unresolved: unresolved.iter().map(ToString::to_string).collect() }, unresolved)
    }
}

/// Decides one plus-letter-bounded sub-query. Returns the verdict, the
/// unsettled sentences and the number of candidates examined.
pub fn decide_plus(inst: &PlusInstance, opts: &BoundedOptions) -> Result<(Verdict, Vec<RealExpFormula>, usize)> {
    let ctx = BlockContext::new(inst);
    let dfa = DegreeDfa::new(inst, &ctx)?;
    if dfa.realized().keys().any(|(_, y)| y.is_empty()) {
        return Err(Error::Structural("a word of s has no path from s' inside the bound".into()));
    }
    let cands = candidates(&dfa);
    let bits = opts.start_bits.unwrap_or_else(semi::start_bits);
    let evals: Vec<Eval> = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
        pool.install(|| cands.par_iter().map(|c| evaluate(inst, &ctx, c, bits)).collect())
    } else {
        let mut out = Vec::new();
        for c in &cands {
            let e = evaluate(inst, &ctx, c, bits);
            let stop = matches!(e, Eval::Holds(_));
            out.push(e);
            if stop {
                break;
            }
        }
        out
    };
    let (v, unresolved) = merge(evals);
    Ok((v, unresolved, cands.len()))
}

/// The plus-letter-bounded sub-queries of `q`, using the supplied bounding
/// words or a detected letter bound.
pub fn plus_pieces(q: &Query, words: Option<&[Vec<usize>]>) -> Result<Vec<PlusInstance>> {
    let lb = match words {
        Some(words) => bounded_to_letter_bounded(q, words)?,
        None => {
            let letters = detect_letter_bounded(&q.automaton, q.s).ok_or_else(|| {
                Error::NotApplicable("the language of s is not letter-bounded; supply bounding words".into())
            })?;
            letter_bounded(q, letters)
        }
    };
    if lb.letters.is_empty() {
        // at most the empty word, which language containment already covers
        return Ok(Vec::new());
    }
    letter_bounded_to_plus(&lb)
}

/// Every sentence the bounded procedure would examine, without settling any.
pub fn bounded_formulas(q: &Query, words: Option<&[Vec<usize>]>) -> Result<Vec<RealExpFormula>> {
    let mut out = Vec::new();
    for inst in plus_pieces(q, words)? {
        let ctx = BlockContext::new(&inst);
        let dfa = DegreeDfa::new(&inst, &ctx)?;
        out.extend(candidates(&dfa).iter().map(|c| emit_formula(&inst, &ctx, c)));
    }
    Ok(out)
}

/// Decides whether `s` is big-O of `s'` when `L_s` is bounded: by the
/// supplied words, or by a detected letter bound.
pub fn decide_bounded(q: &Query, opts: &BoundedOptions) -> Result<BoundedReport> {
    let wa = &q.automaton;
    if let LcResult::Counterexample(w) = lc_check(q) {
        let word = w.iter().map(|&a| wa.symbol_name(a).to_string()).collect();
        return Ok(BoundedReport {
            verdict: Verdict::NotBigO { witness: Witness::LcCounterexample { word } },
            unresolved: Vec::new(),
            sub_queries: 0,
            candidates: 0,
        });
    }
    let pieces = plus_pieces(q, opts.words.as_deref())?;
    let mut unresolved = Vec::new();
    let mut total = 0;
    for inst in &pieces {
        let (v, mut un, n) = decide_plus(inst, opts)?;
        total += n;
        if v.is_not_big_o() {
            return Ok(BoundedReport { verdict: v, unresolved: Vec::new(), sub_queries: pieces.len(), candidates: total });
        }
        unresolved.append(&mut un);
    }
    let verdict = if unresolved.is_empty() {
        Verdict::IsBigO
    } else {
        Verdict::Unknown { unresolved: unresolved.iter().map(ToString::to_string).collect() }
    };
    Ok(BoundedReport { verdict, unresolved, sub_queries: pieces.len(), candidates: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::WeightedAutomaton;
    use crate::rational::rat;
    use crate::unary::decide_unary;

    fn bounded_ab(p: i64) -> Query {
        let wa = WeightedAutomaton::from_transitions(
            &["s", "x1", "y1", "s'", "x2", "y2", "x3", "y3", "t"],
            &["a", "b"],
            &["t"],
            &[
                ("s", "a", "x1", rat(1, 1)),
                ("x1", "a", "x1", rat(3, 5)),
                ("x1", "a", "y1", rat(2, 5)),
                ("y1", "b", "y1", rat(2, 5)),
                ("y1", "b", "t", rat(3, 5)),
                ("s'", "a", "x2", rat(1, 2)),
                ("x2", "a", "x2", rat(59, 100)),
                ("x2", "a", "y2", rat(41, 100)),
                ("y2", "b", "y2", rat(41, 100)),
                ("y2", "b", "t", rat(59, 100)),
                ("s'", "a", "x3", rat(1, 2)),
                ("x3", "a", "x3", rat(p, 100)),
                ("x3", "a", "y3", rat(100 - p, 100)),
                ("y3", "b", "y3", rat(39, 100)),
                ("y3", "b", "t", rat(61, 100)),
            ],
        )
        .unwrap();
        Query::named(wa, "s", "s'").unwrap()
    }

    /// Matrix product with every entry stored as its natural log.
    fn log_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let terms: Vec<f64> = (0..n).map(|k| a[i][k] + b[k][j]).collect();
                        let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                        if m == f64::NEG_INFINITY {
                            m
                        } else {
                            m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `ln(W_s(w) / W_s'(w))` for `w = a₁^{n₁}⋯a_m^{n_m}`, by repeated
    /// squaring over log-domain matrices.
    fn log_ratio(q: &Query, lengths: &[u64]) -> f64 {
        let wa = &q.automaton;
        let n = wa.num_states();
        let mut acc: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { f64::NEG_INFINITY }).collect()).collect();
        for (a, &len) in lengths.iter().enumerate() {
            let mut base: Vec<Vec<f64>> = wa.matrix(a).iter().map(|r| r.iter().map(|x| to_f64(x).ln()).collect()).collect();
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

    #[test]
    fn bounded_ab_boundary() {
        let fine = decide_bounded(&bounded_ab(62), &BoundedOptions::default()).unwrap();
        assert!(fine.verdict.is_big_o(), "{:?}", fine.verdict);
        assert!(fine.unresolved.is_empty());
        let q = bounded_ab(61);
        let bad = decide_bounded(&q, &BoundedOptions::default()).unwrap();
        match &bad.verdict {
            Verdict::NotBigO { witness: Witness::Divergence { grid, blocks, .. } } => {
                assert_eq!(blocks, &["a", "b"]);
                assert!(grid.len() >= 3);
                let ratios: Vec<f64> = grid
                    .iter()
                    .map(|g| log_ratio(&q, &g.lengths))
                    .collect();
                assert!(ratios.windows(2).all(|r| r[0] < r[1]), "{ratios:?}");
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn parallel_evaluation_agrees() {
        let opts = BoundedOptions { threads: 4, ..Default::default() };
        for p in [61, 62] {
            let seq = decide_bounded(&bounded_ab(p), &BoundedOptions::default()).unwrap();
            let par = decide_bounded(&bounded_ab(p), &opts).unwrap();
            assert_eq!(seq.verdict.label(), par.verdict.label());
        }
    }

    #[test]
    fn explicit_words_match_detection() {
        let q = bounded_ab(61);
        let opts = BoundedOptions { words: Some(vec![vec![0], vec![1]]), ..Default::default() };
        assert!(decide_bounded(&q, &opts).unwrap().verdict.is_not_big_o());
        let opts = BoundedOptions { words: Some(vec![vec![0, 1]]), ..Default::default() };
        assert!(matches!(decide_bounded(&q, &opts), Err(Error::Structural(_))));
    }

    #[test]
    fn unary_queries_agree_with_the_unary_decider() {
        let unbounded = WeightedAutomaton::from_transitions(
            &["s", "s'", "t"],
            &["a"],
            &["t"],
            &[
                ("s", "a", "s", rat(3, 4)),
                ("s", "a", "t", rat(1, 4)),
                ("s'", "a", "s'", rat(1, 2)),
                ("s'", "a", "t", rat(1, 2)),
            ],
        )
        .unwrap();
        let rates = WeightedAutomaton::from_transitions(
            &["s", "u1", "u2", "s'", "e", "p1", "p2", "r1", "r2", "y", "z", "t"],
            &["a"],
            &["t"],
            &[
                ("s", "a", "u1", rat(1, 1)),
                ("u1", "a", "u1", rat(1, 2)),
                ("u1", "a", "u2", rat(1, 2)),
                ("u2", "a", "u2", rat(1, 2)),
                ("u2", "a", "t", rat(1, 2)),
                ("s'", "a", "e", rat(1, 2)),
                ("e", "a", "p1", rat(1, 1)),
                ("p1", "a", "p2", rat(1, 1)),
                ("p2", "a", "p1", rat(1, 4)),
                ("p2", "a", "r1", rat(3, 4)),
                ("r1", "a", "r2", rat(1, 1)),
                ("r2", "a", "r1", rat(1, 4)),
                ("r2", "a", "t", rat(3, 4)),
                ("s'", "a", "y", rat(1, 2)),
                ("y", "a", "z", rat(1, 1)),
                ("z", "a", "z", rat(1, 4)),
                ("z", "a", "t", rat(3, 4)),
            ],
        )
        .unwrap();
        for wa in [unbounded, rates] {
            let q = Query::named(wa, "s", "s'").unwrap();
            for q in [q.clone(), q.swapped()] {
                let u = decide_unary(&q).unwrap();
                let b = decide_bounded(&q, &BoundedOptions::default()).unwrap().verdict;
                assert_eq!(u.label(), b.label(), "{u:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn non_bounded_language_is_not_applicable() {
        let wa = WeightedAutomaton::from_transitions(
            &["s", "t"],
            &["a", "b"],
            &["s"],
            &[("s", "a", "t", rat(1, 1)), ("t", "b", "s", rat(1, 1))],
        )
        .unwrap();
        let q = Query::named(wa, "s", "s").unwrap();
        assert!(matches!(decide_bounded(&q, &BoundedOptions::default()), Err(Error::NotApplicable(_))));
        let opts = BoundedOptions { words: Some(vec![vec![0, 1]]), ..Default::default() };
        assert!(decide_bounded(&q, &opts).unwrap().verdict.is_big_o());
    }
}
