//! Univariate polynomials with integer coefficients, Sturm sequences and
//! real-root counting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Integer polynomial, coefficients from the constant term upwards.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clears denominators; the result is a positive multiple of the input.
    pub fn from_rationals(coeffs: &[Rational]) -> Poly {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        Poly::new(ints).primitive()
    }

    /// `den·x − num`.
    pub fn linear_root(r: &Rational) -> Poly {
        Poly::new(vec![-r.numer().clone(), r.denom().clone()]).normalized()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of `p(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Sign of the leading coefficient (0 for the zero polynomial).
    fn sign_at_infinity(&self) -> i8 {
        match self.leading() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Divides by the (positive) content; signs are preserved.
    pub fn primitive(&self) -> Poly {
        let content = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() || content.is_one() {
            return self.clone();
        }
        Poly::new(self.coeffs.iter().map(|c| c / &content).collect())
    }

    /// Primitive with a positive leading coefficient.
    pub fn normalized(&self) -> Poly {
        let p = self.primitive();
        if p.sign_at_infinity() < 0 {
            Poly::new(p.coeffs.iter().map(|c| -c).collect())
        } else {
            p
        }
    }

    /// The polynomial `x ↦ p(c·x)`, normalized.
    pub fn scale_arg(&self, c: &Rational) -> Poly {
        let mut pw = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for coef in &self.coeffs {
            out.push(Rational::from_integer(coef.clone()) * &pw);
            pw *= c;
        }
        Poly::from_rationals(&out).normalized()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    fn to_rationals(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }

    /// Largest absolute value of a real root is strictly below this bound.
    pub fn root_bound(&self) -> Rational {
        let Some(lead) = self.leading() else { return Rational::one() };
        let lead = Rational::from_integer(lead.abs());
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| Rational::from_integer(c.abs()) / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + max
    }

    /// Square-free part `p / gcd(p, p')`, normalized.
    pub fn square_free(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.normalized();
        }
        let g = gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.normalized();
        }
        let (q, _) = div_rem(&self.to_rationals(), &g.to_rationals());
        Poly::from_rationals(&q).normalized()
    }
}

fn trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Polynomial long division over the rationals.
fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let f = r.last().expect("non-empty") / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Remainder of `a` by `b`, scaled to a primitive integer polynomial by a
/// positive factor (so signs are preserved).
fn rem(a: &Poly, b: &Poly) -> Poly {
    let (_, r) = div_rem(&a.to_rationals(), &b.to_rationals());
    Poly::from_rationals(&r)
}

/// Greatest common divisor, normalized (the zero polynomial if both are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.normalized(), b.normalized());
    while !y.is_zero() {
        let r = rem(&x, &y);
        x = y;
        y = r.normalized();
    }
    x.normalized()
}

/// Sturm sequence of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Sturm {
        let mut seq = vec![p.clone()];
        let d = p.derivative().primitive();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let n = seq.len();
            let r = rem(&seq[n - 2], &seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(Poly::new(r.coeffs.iter().map(|c| -c).collect()));
        }
        Sturm { seq }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Sturm::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_infinity(&self) -> usize {
        Sturm::variations(self.seq.iter().map(Poly::sign_at_infinity))
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Number of distinct real roots in `[lo, hi]`.
    pub fn count_closed(&self, lo: &Rational, hi: &Rational) -> usize {
        self.count(lo, hi) + usize::from(self.seq[0].sign_at(lo) == 0)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn sturm_counts_roots() {
        // (x-1)(x-2)(x+3)
        let p = Poly::from_i64(&[1, -1]).mul(&Poly::from_i64(&[-2, 1])).mul(&Poly::from_i64(&[3, 1]));
        let s = Sturm::new(&p);
        assert_eq!(s.count(&int(-10), &int(10)), 3);
        assert_eq!(s.count(&int(0), &int(1)), 1);
        assert_eq!(s.count(&int(1), &int(2)), 1);
        assert_eq!(s.count_closed(&int(1), &int(2)), 2);
        assert_eq!(s.count(&rat(3, 2), &rat(19, 10)), 0);
    }

    #[test]
    fn square_free_removes_repeats() {
        // (x-1)^2 (x+1)
        let p = Poly::from_i64(&[-1, 1]).mul(&Poly::from_i64(&[-1, 1])).mul(&Poly::from_i64(&[1, 1]));
        let sf = p.square_free();
        assert_eq!(sf, Poly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn gcd_and_scaling() {
        let a = Poly::from_i64(&[-1, 0, 1]);
        let b = Poly::from_i64(&[-1, 1]).mul(&Poly::from_i64(&[5, 1]));
        assert_eq!(gcd(&a, &b), Poly::from_i64(&[-1, 1]));
        // p(x) = 2x - 1, p(2x) = 4x - 1
        assert_eq!(Poly::from_i64(&[-1, 2]).scale_arg(&int(2)), Poly::from_i64(&[-1, 4]));
    }

    #[test]
    fn root_bound_exceeds_roots() {
        let p = Poly::from_i64(&[-6, 1, 1]); // roots 2, -3
        assert!(p.root_bound() > int(3));
        assert_eq!(format!("{p}"), "x^2 + x - 6");
    }
}
