//! Real algebraic numbers given by a square-free integer polynomial and an
//! isolating rational interval.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::poly::{gcd, Poly, Sturm};
use crate::rational::{format_rational, int, to_f64, Rational};

/// Invariant: `poly` is square-free and has exactly one root in `[lo, hi]`;
/// either `lo == hi` (an exact rational root) or `lo < hi` and neither
/// endpoint is a root.
#[derive(Clone)]
pub struct AlgebraicNumber {
    poly: Poly,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicNumber {
    pub fn from_rational(r: &Rational) -> AlgebraicNumber {
        AlgebraicNumber { poly: Poly::linear_root(r), lo: r.clone(), hi: r.clone() }
    }

    pub fn zero() -> AlgebraicNumber {
        AlgebraicNumber::from_rational(&Rational::zero())
    }

    pub fn one() -> AlgebraicNumber {
        AlgebraicNumber::from_rational(&Rational::one())
    }

    /// Builds the number from a polynomial with exactly one root in
    /// `(lo, hi]`, tightening the interval until the invariant holds.
    pub fn from_half_open(poly: &Poly, lo: Rational, hi: Rational) -> AlgebraicNumber {
        let poly = poly.square_free();
        let sturm = Sturm::new(&poly);
        debug_assert_eq!(sturm.count(&lo, &hi), 1);
        let (mut lo, mut hi) = (lo, hi);
        loop {
            if poly.sign_at(&hi) == 0 {
                return AlgebraicNumber::from_rational(&hi);
            }
            if poly.sign_at(&lo) != 0 {
                return AlgebraicNumber { poly, lo, hi }.simplified();
            }
            let mid = (&lo + &hi) / int(2);
            if poly.sign_at(&mid) == 0 {
                return AlgebraicNumber::from_rational(&mid);
            }
            if sturm.count(&mid, &hi) == 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// Largest real root of `poly` that is `≥ floor`, if any.
    pub fn largest_root_at_least(poly: &Poly, floor: &Rational) -> Option<AlgebraicNumber> {
        let sf = poly.square_free();
        if sf.degree().unwrap_or(0) == 0 {
            return None;
        }
        let sturm = Sturm::new(&sf);
        let mut hi = sf.root_bound().max(floor.clone() + Rational::one());
        let mut lo = floor.clone();
        if sturm.count(&lo, &hi) == 0 {
            return (sf.sign_at(floor) == 0).then(|| AlgebraicNumber::from_rational(floor));
        }
        while sturm.count(&lo, &hi) > 1 {
            let mid = (&lo + &hi) / int(2);
            if sturm.count(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(AlgebraicNumber::from_half_open(&sf, lo, hi))
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.lo)
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(Zero::is_zero)
    }

    /// Detects rational roots. A rational root of a primitive polynomial has
    /// a denominator dividing the leading coefficient `L`; once the interval
    /// is narrower than `1/L²` it holds at most one such fraction, which is
    /// then the simplest rational in the interval.
    fn simplified(mut self) -> AlgebraicNumber {
        if self.poly.degree() == Some(1) {
            let c = self.poly.coeffs();
            let r = Rational::new(-c[0].clone(), c[1].clone());
            return AlgebraicNumber::from_rational(&r);
        }
        let lead = self.poly.leading().expect("non-zero polynomial").abs();
        let bound = Rational::new(One::one(), &lead * &lead);
        while &self.hi - &self.lo >= bound && !self.is_rational() {
            self.refine();
        }
        if self.is_rational() {
            return self;
        }
        let cand = simplest_between(&self.lo, &self.hi);
        if self.poly.sign_at(&cand) == 0 {
            return AlgebraicNumber::from_rational(&cand);
        }
        self
    }

    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        if self.is_rational() {
            return;
        }
        let mid = (&self.lo + &self.hi) / int(2);
        let s_mid = self.poly.sign_at(&mid);
        if s_mid == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            self.poly = Poly::linear_root(&self.lo);
        } else if s_mid == self.poly.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Refines until the interval width is at most `2^-bits`.
    pub fn refine_to(&mut self, bits: u32) {
        let eps = Rational::new(One::one(), num_bigint::BigInt::one() << bits);
        while &self.hi - &self.lo > eps {
            self.refine();
        }
    }

    /// Enclosing interval of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (Rational, Rational) {
        let mut a = self.clone();
        a.refine_to(bits);
        (a.lo, a.hi)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(60);
        to_f64(&((lo + hi) / int(2)))
    }

    /// The number `c·self` for a positive rational `c`.
    pub fn scale(&self, c: &Rational) -> AlgebraicNumber {
        assert!(*c > Rational::zero(), "scale factor must be positive");
        if let Some(r) = self.as_rational() {
            return AlgebraicNumber::from_rational(&(r * c));
        }
        // root of p(x/c)
        let inv = Rational::one() / c;
        AlgebraicNumber { poly: self.poly.scale_arg(&inv), lo: &self.lo * c, hi: &self.hi * c }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.cmp(&AlgebraicNumber::from_rational(r))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &AlgebraicNumber) -> Ordering {
        if self.is_rational() && other.is_rational() {
            return self.lo.cmp(&other.lo);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            let lo = (&a.lo).max(&b.lo).clone();
            let hi = (&a.hi).min(&b.hi).clone();
            let g = gcd(&a.poly, &b.poly);
            if g.degree().unwrap_or(0) > 0 && Sturm::new(&g).count_closed(&lo, &hi) > 0 {
                return Ordering::Equal;
            }
            a.refine();
            b.refine();
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &AlgebraicNumber) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &AlgebraicNumber) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    if !lo.is_positive() {
        return Rational::zero();
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let n = lo.floor();
    n.clone() + Rational::one() / simplest_between(&(Rational::one() / (hi - &n)), &(Rational::one() / (lo - &n)))
}

/// Exact trichotomy between two algebraic numbers.
pub fn compare_radius(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", format_rational(r)),
            None => write!(f, "root of {} in [{}, {}] (~{:.6})", self.poly, self.lo, self.hi, self.to_f64()),
        }
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON form: defining polynomial (constant term first) and interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraicJson {
    pub poly: Vec<String>,
    pub lo: String,
    pub hi: String,
    pub approx: f64,
}

impl AlgebraicNumber {
    pub fn to_json(&self) -> AlgebraicJson {
        AlgebraicJson {
            poly: self.poly.coeffs().iter().map(ToString::to_string).collect(),
            lo: format_rational(&self.lo),
            hi: format_rational(&self.hi),
            approx: self.to_f64(),
        }
    }
}

/// A `(ρ, k)` pair, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RhoK {
    pub rho: AlgebraicNumber,
    pub k: usize,
}

impl RhoK {
    pub fn new(rho: AlgebraicNumber, k: usize) -> RhoK {
        RhoK { rho, k }
    }
}

impl fmt::Display for RhoK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rho, self.k)
    }
}

impl fmt::Debug for RhoK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn golden_ratio() {
        let p = Poly::from_i64(&[-1, -1, 1]);
        let g = AlgebraicNumber::largest_root_at_least(&p, &Rational::zero()).unwrap();
        assert!((g.to_f64() - 1.618_033_988_749_895).abs() < 1e-9);
        assert_eq!(g.cmp_rational(&rat(8, 5)), Ordering::Greater);
        assert_eq!(g.cmp_rational(&rat(13, 8)), Ordering::Less);
    }

    #[test]
    fn half_sqrt_two_vs_seven_tenths() {
        let p = Poly::from_i64(&[-1, 0, 2]);
        let a = AlgebraicNumber::largest_root_at_least(&p, &Rational::zero()).unwrap();
        assert_eq!(compare_radius(&a, &AlgebraicNumber::from_rational(&rat(7, 10))), Ordering::Greater);
    }

    #[test]
    fn equality_across_polynomials() {
        // sqrt 2 as root of x^2-2 and of (x^2-2)(x-5)
        let p = Poly::from_i64(&[-2, 0, 1]);
        let q = p.mul(&Poly::from_i64(&[-5, 1]));
        let a = AlgebraicNumber::largest_root_at_least(&p, &Rational::zero()).unwrap();
        let b = AlgebraicNumber::from_half_open(&q, rat(1, 1), rat(2, 1));
        assert_eq!(a.cmp(&b), Ordering::Equal);
    }

    #[test]
    fn rational_roots_are_exact() {
        // (2x-1)(x+1)
        let p = Poly::from_i64(&[-1, 1, 2]);
        let a = AlgebraicNumber::largest_root_at_least(&p, &Rational::zero()).unwrap();
        assert_eq!(a.as_rational(), Some(&rat(1, 2)));
        assert_eq!(a.scale(&rat(1, 2)).as_rational(), Some(&rat(1, 4)));
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-4, 10), &rat(-3, 10)), rat(-1, 3));
        assert_eq!(simplest_between(&rat(7, 5), &rat(9, 5)), rat(3, 2));
    }

    #[test]
    fn scaling_irrational() {
        let p = Poly::from_i64(&[-2, 0, 1]);
        let a = AlgebraicNumber::largest_root_at_least(&p, &Rational::zero()).unwrap();
        let h = a.scale(&rat(1, 2));
        assert!((h.to_f64() - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-12);
        assert_eq!(h.cmp(&a), Ordering::Less);
    }
}
