//! Outward-rounded interval arithmetic over dyadic rationals, including
//! certified natural logarithms.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebraic::AlgebraicNumber;
use crate::rational::{dyadic_ceil, dyadic_floor, int, to_f64, Rational};

/// Closed interval `[lo, hi]` with `lo ≤ hi`.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Interval {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Interval {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Interval {
        Interval::point(Rational::zero())
    }

    pub fn from_algebraic(a: &AlgebraicNumber, bits: u32) -> Interval {
        let (lo, hi) = a.enclosure(bits);
        Interval::new(lo, hi)
    }

    /// Rounds both ends outward to multiples of `2^-bits`.
    pub fn rounded(&self, bits: u32) -> Interval {
        Interval { lo: dyadic_floor(&self.lo, bits), hi: dyadic_ceil(&self.hi, bits) }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Interval { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified sign: `Some(±1)` when the interval excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / int(2)))
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self, bits: u32) -> Interval {
        assert!(self.is_positive(), "logarithm of a non-positive interval");
        Interval { lo: ln_rational(&self.lo, bits).lo, hi: ln_rational(&self.hi, bits).hi }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

/// `2·atanh(z)` for `0 ≤ z ≤ 1/3`, enclosed to roughly `2^-bits`.
fn two_atanh(z: &Rational, bits: u32) -> Interval {
    let w = bits + 16;
    let zl = dyadic_floor(z, w);
    let zh = dyadic_ceil(z, w);
    let z2l = dyadic_floor(&(&zl * &zl), w);
    let z2h = dyadic_ceil(&(&zh * &zh), w);
    let eps = Rational::new(BigInt::one(), BigInt::one() << w);
    let (mut pl, mut ph) = (zl, zh);
    let (mut sl, mut sh) = (Rational::zero(), Rational::zero());
    let mut j: i64 = 0;
    loop {
        let d = int(2 * j + 1);
        let th = dyadic_ceil(&(&ph / &d), w);
        if th <= eps {
            // geometric tail with ratio at most z² ≤ 1/9
            sh += th * Rational::new(BigInt::from(9), BigInt::from(8));
            break;
        }
        sl += dyadic_floor(&(&pl / &d), w);
        sh += th;
        pl = dyadic_floor(&(&pl * &z2l), w);
        ph = dyadic_ceil(&(&ph * &z2h), w);
        j += 1;
    }
    Interval { lo: sl * int(2), hi: sh * int(2) }
}

fn ln2(bits: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("ln2 cache").get(&bits) {
        return v.clone();
    }
    let v = two_atanh(&Rational::new(BigInt::one(), BigInt::from(3)), bits + 8);
    cache.lock().expect("ln2 cache").insert(bits, v.clone());
    v
}

/// Certified enclosure of `ln x` for rational `x > 0`.
pub fn ln_rational(x: &Rational, bits: u32) -> Interval {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    if x.is_one() {
        return Interval::zero();
    }
    // x = 2^k · y with 1 ≤ y < 2
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = int(2);
    let pow2 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as usize)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    let mut y = x / pow2(k);
    while y >= two {
        y /= &two;
        k += 1;
    }
    while y < Rational::one() {
        y *= &two;
        k -= 1;
    }
    let z = (&y - Rational::one()) / (&y + Rational::one());
    let extra = 64 - (k.unsigned_abs().max(1)).leading_zeros();
    let ly = two_atanh(&z, bits + 4);
    let l2 = ln2(bits + 4 + extra);
    ly.add(&l2.scale(&int(k))).rounded(bits + 2)
}
