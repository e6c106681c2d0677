//! Real-exponential sentences of the shape
//!
//! ```text
//! ∀C < 0 ∃x ≥ B:  ⋁_alt ⋀_j  Σ_i c_{j,i}·x_i + p_{j,i}·log(x_i) < C
//! ```
//!
//! where every `c_{j,i}` is a non-negative integer multiple of the logarithm
//! of a ratio of two positive algebraic numbers.

use std::fmt::{self, Write as _};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebraic::AlgebraicNumber;
use crate::interval::Interval;
use crate::rational::{format_rational, Rational};
use crate::verdict::RhoKJson;

/// `ln(num / den)` for positive algebraic `num`, `den`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRatio {
    pub num: AlgebraicNumber,
    pub den: AlgebraicNumber,
}

fn ln_algebraic(a: &AlgebraicNumber, bits: u32) -> Interval {
    let mut b = bits;
    loop {
        let iv = Interval::from_algebraic(a, b);
        if iv.is_positive() {
            return iv.ln(bits);
        }
        b *= 2;
    }
}

impl LogRatio {
    pub fn new(num: AlgebraicNumber, den: AlgebraicNumber) -> LogRatio {
        assert!(!num.is_zero() && !den.is_zero(), "logarithm of zero");
        LogRatio { num, den }
    }

    /// True when the logarithm is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.num == self.den
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        if self.is_zero() {
            return Interval::zero();
        }
        ln_algebraic(&self.num, bits).sub(&ln_algebraic(&self.den, bits))
    }
}

/// `scale · ln(num/den)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub scale: u64,
    pub log: LogRatio,
}

impl Coefficient {
    pub fn is_zero(&self) -> bool {
        self.scale == 0 || self.log.is_zero()
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        if self.is_zero() {
            return Interval::zero();
        }
        self.log.enclose(bits).scale(&Rational::from_integer(self.scale.into()))
    }
}

/// One conjunct `Σ_i coeffs[i]·x_i + log_powers[i]·log(x_i) < C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpRow {
    pub coeffs: Vec<Coefficient>,
    pub log_powers: Vec<i64>,
}

/// Where a sentence came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Provenance {
    /// Degree vector `x` of `s`, degree set `y` of `s'`, linear set
    /// `base + periods·λ`, and the unbounded coordinates `u`.
    Bounded {
        blocks: Vec<String>,
        x: Vec<RhoKJson>,
        y: Vec<Vec<RhoKJson>>,
        base: Vec<u64>,
        periods: Vec<u64>,
        u: Vec<usize>,
    },
    /// Tuple index in the supplied Δ.
    FinitelyAmbiguous { tuple: usize },
}

/// Closed sentence; see the module documentation for its meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct RealExpFormula {
    pub provenance: Provenance,
    pub vars: Vec<String>,
    pub lower: Rational,
    /// Disjunction of conjunctions.
    pub alternatives: Vec<Vec<ExpRow>>,
}

/// Terms of the sentence AST.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Var(String),
    Num(Rational),
    /// Index into [`RealExpFormula::constants`].
    Const(usize),
    Log(Box<Term>),
    Exp(Box<Term>),
    Add(Vec<Term>),
    Mul(Vec<Term>),
}

/// Formulas of the sentence AST.
#[derive(Debug, Clone, PartialEq)]
pub enum Sentence {
    Forall(String, Box<Sentence>),
    Exists(Vec<String>, Box<Sentence>),
    Implies(Box<Sentence>, Box<Sentence>),
    And(Vec<Sentence>),
    Or(Vec<Sentence>),
    Lt(Term, Term),
    Ge(Term, Term),
}

impl RealExpFormula {
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Distinct algebraic constants, in first-use order.
    pub fn constants(&self) -> Vec<AlgebraicNumber> {
        let mut out: Vec<AlgebraicNumber> = Vec::new();
        for row in self.alternatives.iter().flatten() {
            for c in &row.coeffs {
                for a in [&c.log.num, &c.log.den] {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
            }
        }
        out
    }

    pub fn sentence(&self) -> Sentence {
        let consts = self.constants();
        let cid = |a: &AlgebraicNumber| consts.iter().position(|c| c == a).expect("constant listed");
        let var = |i: usize| Term::Var(self.vars[i].clone());
        let row_term = |row: &ExpRow| {
            let mut parts = Vec::new();
            for (i, c) in row.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let ratio = Term::Add(vec![
                        Term::Log(Box::new(Term::Const(cid(&c.log.num)))),
                        Term::Mul(vec![Term::Num(-Rational::one()), Term::Log(Box::new(Term::Const(cid(&c.log.den))))]),
                    ]);
                    parts.push(Term::Mul(vec![Term::Num(Rational::from_integer(c.scale.into())), ratio, var(i)]));
                }
                if row.log_powers[i] != 0 {
                    parts.push(Term::Mul(vec![
                        Term::Num(Rational::from_integer(row.log_powers[i].into())),
                        Term::Log(Box::new(var(i))),
                    ]));
                }
            }
            if parts.is_empty() {
                Term::Num(Rational::zero())
            } else {
                Term::Add(parts)
            }
        };
        let c = Term::Var("C".into());
        let mut body: Vec<Sentence> =
            (0..self.dim()).map(|i| Sentence::Ge(var(i), Term::Num(self.lower.clone()))).collect();
        let alts: Vec<Sentence> = self
            .alternatives
            .iter()
            .map(|rows| Sentence::And(rows.iter().map(|r| Sentence::Lt(row_term(r), c.clone())).collect()))
            .collect();
        body.push(if alts.len() == 1 { alts.into_iter().next().expect("one") } else { Sentence::Or(alts) });
        let inner = Sentence::Exists(self.vars.clone(), Box::new(Sentence::And(body)));
        Sentence::Forall(
            "C".into(),
            Box::new(Sentence::Implies(
                Box::new(Sentence::Lt(c.clone(), Term::Num(Rational::zero()))),
                Box::new(inner),
            )),
        )
    }

    /// SMT-LIB 2 script asserting the sentence, with `exp` and `log` as
    /// axiomatized uninterpreted functions.
    pub fn to_smtlib(&self) -> String {
        let mut out = String::new();
        let prov = serde_json::to_string(&self.provenance).expect("provenance serializes");
        let _ = writeln!(out, "; bigo-wa real-exponential sentence");
        let _ = writeln!(out, "; provenance: {prov}");
        let consts = self.constants();
        for (i, c) in consts.iter().enumerate() {
            let _ = writeln!(out, "; c{i} = {c}");
        }
        out.push_str("(set-logic ALL)\n");
        out.push_str("(declare-fun exp (Real) Real)\n(declare-fun log (Real) Real)\n");
        out.push_str("(assert (forall ((x Real)) (> (exp x) 0.0)))\n");
        out.push_str("(assert (forall ((x Real)) (= (log (exp x)) x)))\n");
        out.push_str("(assert (forall ((x Real)) (=> (> x 0.0) (= (exp (log x)) x))))\n");
        out.push_str("(assert (forall ((x Real) (y Real)) (= (exp (+ x y)) (* (exp x) (exp y)))))\n");
        out.push_str("(assert (forall ((x Real) (y Real)) (=> (< x y) (< (exp x) (exp y)))))\n");
        for (i, c) in consts.iter().enumerate() {
            let _ = writeln!(out, "(declare-const c{i} Real)");
            match c.as_rational() {
                Some(r) => {
                    let _ = writeln!(out, "(assert (= c{i} {}))", smt_num(r));
                }
                None => {
                    let terms: Vec<String> = c
                        .poly()
                        .coeffs()
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| !a.is_zero())
                        .map(|(d, a)| {
                            let a = smt_num(&Rational::from_integer(a.clone()));
                            match d {
                                0 => a,
                                _ => format!("(* {a} {})", vec![format!("c{i}"); d].join(" ")),
                            }
                        })
                        .collect();
                    let _ = writeln!(out, "(assert (= (+ 0.0 {}) 0.0))", terms.join(" "));
                    let _ =
                        writeln!(out, "(assert (and (< {} c{i}) (<= c{i} {})))", smt_num(c.lo()), smt_num(c.hi()));
                }
            }
        }
        let _ = writeln!(out, "(assert {})", smt_sentence(&self.sentence()));
        out.push_str("(check-sat)\n");
        out
    }
}

fn smt_num(r: &Rational) -> String {
    let body = if r.is_integer() {
        format!("{}.0", r.numer().abs())
    } else {
        format!("(/ {}.0 {}.0)", r.numer().abs(), r.denom())
    };
    if r.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

fn smt_term(t: &Term) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::Num(r) => smt_num(r),
        Term::Const(i) => format!("c{i}"),
        Term::Log(a) => format!("(log {})", smt_term(a)),
        Term::Exp(a) => format!("(exp {})", smt_term(a)),
        Term::Add(v) => format!("(+ {})", v.iter().map(smt_term).collect::<Vec<_>>().join(" ")),
        Term::Mul(v) => format!("(* {})", v.iter().map(smt_term).collect::<Vec<_>>().join(" ")),
    }
}

fn smt_sentence(s: &Sentence) -> String {
    match s {
        Sentence::Forall(v, b) => format!("(forall (({v} Real)) {})", smt_sentence(b)),
        Sentence::Exists(vs, b) => {
            let decl: Vec<String> = vs.iter().map(|v| format!("({v} Real)")).collect();
            format!("(exists ({}) {})", decl.join(" "), smt_sentence(b))
        }
        Sentence::Implies(a, b) => format!("(=> {} {})", smt_sentence(a), smt_sentence(b)),
        Sentence::And(v) => format!("(and {})", v.iter().map(smt_sentence).collect::<Vec<_>>().join(" ")),
        Sentence::Or(v) => format!("(or {})", v.iter().map(smt_sentence).collect::<Vec<_>>().join(" ")),
        Sentence::Lt(a, b) => format!("(< {} {})", smt_term(a), smt_term(b)),
        Sentence::Ge(a, b) => format!("(>= {} {})", smt_term(a), smt_term(b)),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Term], sep: &str| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep);
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Num(r) => write!(f, "{}", format_rational(r)),
            Term::Const(i) => write!(f, "c{i}"),
            Term::Log(a) => write!(f, "log({a})"),
            Term::Exp(a) => write!(f, "exp({a})"),
            Term::Add(v) => write!(f, "({})", join(v, " + ")),
            Term::Mul(v) => write!(f, "{}", join(v, "·")),
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Sentence], sep: &str| v.iter().map(|s| format!("({s})")).collect::<Vec<_>>().join(sep);
        match self {
            Sentence::Forall(v, b) => write!(f, "∀{v}. {b}"),
            Sentence::Exists(vs, b) => write!(f, "∃{}. {b}", vs.join(",")),
            Sentence::Implies(a, b) => write!(f, "{a} → {b}"),
            Sentence::And(v) => write!(f, "{}", join(v, " ∧ ")),
            Sentence::Or(v) => write!(f, "{}", join(v, " ∨ ")),
            Sentence::Lt(a, b) => write!(f, "{a} < {b}"),
            Sentence::Ge(a, b) => write!(f, "{a} ≥ {b}"),
        }
    }
}

impl fmt::Display for RealExpFormula {
    /// Compact one-line rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lower = if self.lower.is_integer() { self.lower.numer().to_string() } else { format_rational(&self.lower) };
        write!(f, "∀C<0 ∃{} ≥ {lower}:", self.vars.join(","))?;
        for (a, rows) in self.alternatives.iter().enumerate() {
            if a > 0 {
                write!(f, " ∨")?;
            }
            let conj: Vec<String> = rows
                .iter()
                .map(|row| {
                    let mut parts = Vec::new();
                    for (i, c) in row.coeffs.iter().enumerate() {
                        if !c.is_zero() {
                            let scale = if c.scale == 1 { String::new() } else { format!("{}·", c.scale) };
                            parts.push(format!("{scale}log(({})/({}))·{}", c.log.num, c.log.den, self.vars[i]));
                        }
                        if row.log_powers[i] != 0 {
                            parts.push(format!("{}·log({})", row.log_powers[i], self.vars[i]));
                        }
                    }
                    if parts.is_empty() {
                        parts.push("0".into());
                    }
                    format!("{} < C", parts.join(" + "))
                })
                .collect();
            write!(f, " [{}]", conj.join(" ∧ "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn alg(n: i64, d: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_rational(&rat(n, d))
    }

    fn sample() -> RealExpFormula {
        RealExpFormula {
            provenance: Provenance::FinitelyAmbiguous { tuple: 0 },
            vars: vec!["x1".into()],
            lower: rat(1, 1),
            alternatives: vec![vec![ExpRow {
                coeffs: vec![Coefficient { scale: 2, log: LogRatio::new(alg(1, 2), alg(1, 1)) }],
                log_powers: vec![-1],
            }]],
        }
    }

    #[test]
    fn coefficient_enclosure_contains_value() {
        let c = &sample().alternatives[0][0].coeffs[0];
        let iv = c.enclose(64);
        let v = 2.0 * 0.5f64.ln();
        assert!(iv.mid_f64() - v < 1e-12 && v - iv.mid_f64() < 1e-12);
        assert!(iv.is_negative());
    }

    #[test]
    fn smtlib_mentions_every_piece() {
        let s = sample().to_smtlib();
        for needle in ["(declare-fun exp", "(declare-const c0 Real)", "(forall ((C Real))", "(check-sat)", "(log x1)"] {
            assert!(s.contains(needle), "{needle} missing from\n{s}");
        }
        let open = s.matches('(').count();
        assert_eq!(open, s.matches(')').count());
    }
}
