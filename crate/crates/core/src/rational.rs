//! Helpers around [`BigRational`]: construction, parsing of `num/den`
//! strings and canonical printing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Result of parsing a weight string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedWeight {
    pub value: Rational,
    /// True when the input was not already in lowest terms (`3/6`).
    pub was_reduced: bool,
}

/// Parses `"n"` or `"n/d"` with decimal integers; no decimal points.
pub fn parse_rational(s: &str) -> Result<ParsedWeight> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let parse_int = |x: &str| -> Result<BigInt> {
        let body = x.strip_prefix(['-', '+']).unwrap_or(x);
        if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("`{s}` is not a rational of the form num/den")));
        }
        x.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("`{s}` is not a rational of the form num/den")))
    };
    let n = parse_int(num)?;
    let d = parse_int(den)?;
    if d.is_zero() {
        return Err(Error::Parse(format!("`{s}` has a zero denominator")));
    }
    let value = BigRational::new(n.clone(), d.clone());
    let was_reduced = value.numer() != &n || value.denom() != &d;
    Ok(ParsedWeight { value, was_reduced })
}

/// Canonical `num/den` text (always with a denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Largest integer `<= r`.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

/// `r^e` for a non-negative exponent.
pub fn pow(r: &Rational, e: u64) -> Rational {
    let mut base = r.clone();
    let mut acc = Rational::one();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Dyadic approximation `floor(r * 2^bits) / 2^bits` (rounded toward -inf).
pub fn dyadic_floor(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let n = (r * BigRational::from_integer(scale.clone())).floor().to_integer();
    BigRational::new(n, scale)
}

/// Dyadic approximation rounded toward +inf.
pub fn dyadic_ceil(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let n = (r * BigRational::from_integer(scale.clone())).ceil().to_integer();
    BigRational::new(n, scale)
}

/// Best-effort conversion to `f64` for diagnostics only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // scale down huge values through their bit lengths
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = (nb.max(db) - 60).max(0) as u32;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if n >= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY }
            } else {
                n / d
            }
        }
    }
}

/// Closest rational with denominator at most `max_den` (continued fractions).
pub fn from_f64_approx(x: f64, max_den: u64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let ai = a as u128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::zero();
    }
    let r = BigRational::new(BigInt::from(p1), BigInt::from(q1));
    if neg { -r } else { r }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        let p = parse_rational("3/6").unwrap();
        assert_eq!(p.value, rat(1, 2));
        assert!(p.was_reduced);
        assert!(!parse_rational("1/2").unwrap().was_reduced);
        assert_eq!(parse_rational("7").unwrap().value, int(7));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(parse_rational("-1/2").unwrap().value, rat(-1, 2));
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
    }

    #[test]
    fn continued_fraction_approximation() {
        assert_eq!(from_f64_approx(0.6666666667, 100), rat(2, 3));
        assert_eq!(from_f64_approx(-0.25, 10), rat(-1, 4));
    }
}
