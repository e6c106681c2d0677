//! The finitely ambiguous case, given the finite set Δ of tuples
//! `(p, q¹…q^k, r, s¹…s^ℓ)` that describes the weights: `s` is not big-O of
//! `s'` iff for some tuple and every `C` there is `x ∈ ℕ^m` with
//! `Σ_i p_i·∏_j (q^i_j)^{x_j} ≥ C·Σ_i r_i·∏_j (s^i_j)^{x_j}`.
//!
//! The left sum is within a constant of its largest term and the right sum
//! likewise, so the condition is a disjunction over left terms `i` of
//! `⋀_{i'} Σ_j x_j·log(s^{i'}_j / q^i_j) < C'`.

use num_traits::Signed;
use serde::Serialize;

use crate::algebraic::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational};
use crate::verdict::{GridPoint, Verdict, Witness};

use super::formula::{Coefficient, ExpRow, LogRatio, Provenance, RealExpFormula};
use super::semi::{semi_decide_from, start_bits, SemiOutcome};

/// One element of Δ; every entry must be strictly positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaTuple {
    pub p: Vec<Rational>,
    pub q: Vec<Vec<Rational>>,
    pub r: Vec<Rational>,
    pub s: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaTupleJson {
    pub p: Vec<String>,
    pub q: Vec<Vec<String>>,
    pub r: Vec<String>,
    pub s: Vec<Vec<String>>,
}

impl DeltaTuple {
    /// Checks positivity and shapes; returns the dimension `m`.
    pub fn validate(&self) -> Result<usize> {
        let err = |m: &str| Err(Error::InvalidInput(format!("Δ tuple: {m}")));
        if self.p.is_empty() || self.r.is_empty() {
            return err("both sides need at least one term");
        }
        if self.q.len() != self.p.len() || self.s.len() != self.r.len() {
            return err("one base vector per coefficient is required");
        }
        let m = self.q[0].len();
        if self.q.iter().chain(&self.s).any(|v| v.len() != m) {
            return err("base vectors must have equal length");
        }
        let all = self.p.iter().chain(&self.r).chain(self.q.iter().flatten()).chain(self.s.iter().flatten());
        for x in all {
            if !x.is_positive() {
                return err(&format!("entry {} is not strictly positive", format_rational(x)));
            }
        }
        Ok(m)
    }

    pub fn to_json(&self) -> DeltaTupleJson {
        let v = |xs: &[Rational]| xs.iter().map(format_rational).collect::<Vec<_>>();
        DeltaTupleJson {
            p: v(&self.p),
            q: self.q.iter().map(|x| v(x)).collect(),
            r: v(&self.r),
            s: self.s.iter().map(|x| v(x)).collect(),
        }
    }
}

/// One sentence per tuple, with one alternative per left-hand term.
pub fn finitely_ambiguous_formula(delta: &[DeltaTuple]) -> Result<Vec<RealExpFormula>> {
    delta
        .iter()
        .enumerate()
        .map(|(t, d)| {
            let m = d.validate()?;
            let alg = AlgebraicNumber::from_rational;
            let alternatives = d
                .q
                .iter()
                .map(|qi| {
                    d.s.iter()
                        .map(|si| ExpRow {
                            coeffs: (0..m)
                                .map(|j| Coefficient { scale: 1, log: LogRatio::new(alg(&si[j]), alg(&qi[j])) })
                                .collect(),
                            log_powers: vec![0; m],
                        })
                        .collect()
                })
                .collect();
            Ok(RealExpFormula {
                provenance: Provenance::FinitelyAmbiguous { tuple: t },
                vars: (1..=m).map(|j| format!("x{j}")).collect(),
                lower: Rational::from_integer(0.into()),
                alternatives,
            })
        })
        .collect()
}

/// NotBigO iff some tuple's sentence is certified to hold; IsBigO iff all
/// are certified to fail; Unknown otherwise. Also returns the unsettled
/// sentences.
pub fn decide_finitely_ambiguous(
    delta: &[DeltaTuple],
    bits: Option<u32>,
) -> Result<(Verdict, Vec<RealExpFormula>)> {
    let bits = bits.unwrap_or_else(start_bits);
    let mut unresolved = Vec::new();
    for f in finitely_ambiguous_formula(delta)? {
        match semi_decide_from(&f, bits) {
            SemiOutcome::Holds { grid, .. } => {
                let grid = grid
                    .iter()
                    .map(|p| GridPoint { lengths: p.values.clone(), objective_upper: to_f64(&p.objective.hi) })
                    .collect();
                let witness = Witness::Divergence { formula: f.to_string(), blocks: f.vars.clone(), grid };
                return Ok((Verdict::NotBigO { witness }, Vec::new()));
            }
            SemiOutcome::Fails { .. } => {}
            SemiOutcome::Unknown => unresolved.push(f),
        }
    }
    if unresolved.is_empty() {
        Ok((Verdict::IsBigO, unresolved))
    } else {
        let text = unresolved.iter().map(ToString::to_string).collect();
        Ok((Verdict::Unknown { unresolved: text }, unresolved))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn tuple(p: &[i64], q: &[&[i64]], r: &[i64], s: &[&[i64]]) -> DeltaTuple {
        let v = |xs: &[i64]| xs.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>();
        DeltaTuple { p: v(p), q: q.iter().map(|x| v(x)).collect(), r: v(r), s: s.iter().map(|x| v(x)).collect() }
    }

    #[test]
    fn doubling_against_constant_holds() {
        let d = tuple(&[1], &[&[2]], &[1], &[&[1]]);
        let (v, _) = decide_finitely_ambiguous(&[d], None).unwrap();
        match v {
            Verdict::NotBigO { witness: Witness::Divergence { grid, .. } } => {
                assert!(grid.len() >= 3);
                // the ratio 2^x / 1^x itself grows along the grid
                let xs: Vec<u64> = grid.iter().map(|g| g.lengths[0]).collect();
                assert!(xs.windows(2).all(|w| w[0] < w[1]));
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn identical_sides_fail() {
        let d = tuple(&[3], &[&[2, 5]], &[3], &[&[2, 5]]);
        assert!(decide_finitely_ambiguous(&[d], None).unwrap().0.is_big_o());
    }

    #[test]
    fn integer_grid_agrees_with_verdict() {
        // left 3^x + 1, right 2^x: unbounded; left 2^x, right 2^x + 3^x: bounded
        let up = tuple(&[1, 1], &[&[3], &[1]], &[1], &[&[2]]);
        let down = tuple(&[1], &[&[2]], &[1, 1], &[&[2], &[3]]);
        assert!(decide_finitely_ambiguous(&[up], None).unwrap().0.is_not_big_o());
        assert!(decide_finitely_ambiguous(&[down], None).unwrap().0.is_big_o());
        for x in 0..=60u32 {
            let l = 3f64.powi(x as i32) + 1.0;
            let r = 2f64.powi(x as i32);
            assert!(l / r >= 1.5f64.powi(x as i32) * 0.99);
        }
    }

    #[test]
    fn non_positive_entries_are_rejected() {
        let mut d = tuple(&[1], &[&[2]], &[1], &[&[1]]);
        d.s[0][0] = rat(0, 1);
        assert!(matches!(finitely_ambiguous_formula(&[d]), Err(Error::InvalidInput(_))));
    }
}
