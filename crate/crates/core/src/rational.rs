//! Exact rational positions and intervals on the real line.
//!
//! Every atom position, shift and interval endpoint is a [`Rational`]
//! (arbitrary precision, always in lowest terms with a positive
//! denominator). Floating point only enters when a position is fed to a
//! test function or a phase is evaluated.

use std::f64::consts::PI;
use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, Complex, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << (e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.25"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical `"p/q"` form (`"p"` when the denominator is one).
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite double to a rational.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// `log2 |r|`, accurate even when `r` is far outside the double range.
pub fn log2_abs(r: &Rational) -> f64 {
    fn log2_int(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits <= 1000 {
            n.to_f64().unwrap().abs().log2()
        } else {
            let shift = bits - 60;
            let top = (n.abs() >> (shift as usize)).to_f64().unwrap();
            top.log2() + shift as f64
        }
    }
    log2_int(r.numer()) - log2_int(r.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// `e^{-2 pi i theta}` with `theta` reduced exactly modulo one first.
pub fn unit_phase(theta: &Rational) -> Complex<f64> {
    let mut f = frac(theta);
    if f > ratio(1, 2) {
        f -= Rational::one();
    }
    let angle = -2.0 * PI * to_f64(&f);
    Complex::new(angle.cos(), angle.sin())
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Non-negative remainder of `n` modulo `m`.
pub fn mod_index(n: &BigInt, m: usize) -> usize {
    let r = n.mod_floor(&BigInt::from(m));
    r.to_usize().expect("remainder fits")
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn sign(r: &Rational) -> Sign {
    r.numer().sign()
}

/// Serde helper: rationals travel as `"p/q"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A bounded interval with exact endpoints, each independently open or closed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_open: bool, hi_open: bool) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow(format!(
                "interval endpoints out of order: {} > {}",
                format(&lo),
                format(&hi)
            )));
        }
        Ok(Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    /// `[lo, hi]`. Panics if `lo > hi`.
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, false, false).expect("ordered endpoints")
    }

    /// `(lo, hi)`.
    pub fn open(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, true, true).expect("ordered endpoints")
    }

    /// `[lo, hi)`.
    pub fn closed_open(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, false, true).expect("ordered endpoints")
    }

    /// `(lo, hi]`.
    pub fn open_closed(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, true, false).expect("ordered endpoints")
    }

    /// Symmetric open window `(c - r, c + r)`.
    pub fn open_around(c: &Rational, r: &Rational) -> Self {
        Self::open(c - r, c + r)
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi && (self.lo_open || self.hi_open)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_open { *x > self.lo } else { *x >= self.lo };
        let below = if self.hi_open { *x < self.hi } else { *x <= self.hi };
        above && below
    }

    /// Whether `self` is a subset of `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        if self.is_empty() {
            return true;
        }
        let lo_ok = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => !other.lo_open || self.lo_open,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => !other.hi_open || self.hi_open,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_open),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_open),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_open),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_open),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        if lo > hi {
            return None;
        }
        let iv = Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        };
        (!iv.is_empty()).then_some(iv)
    }

    pub fn translate(&self, h: &Rational) -> Interval {
        Interval {
            lo: &self.lo + h,
            hi: &self.hi + h,
            ..self.clone()
        }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Integer range `{ n : n / m + shift in self }`, or `None` when empty.
    pub fn lattice_range(&self, m: u64, shift: &Rational) -> Option<(BigInt, BigInt)> {
        let scale = Rational::from_integer(BigInt::from(m));
        let lo = (&self.lo - shift) * &scale;
        let hi = (&self.hi - shift) * &scale;
        let mut n_lo = ceil_int(&lo);
        if self.lo_open && is_integer(&lo) {
            n_lo += 1;
        }
        let mut n_hi = floor_int(&hi);
        if self.hi_open && is_integer(&hi) {
            n_hi -= 1;
        }
        (n_lo <= n_hi).then_some((n_lo, n_hi))
    }

    /// Parses `"[a, b]"`, `"(a, b)"`, `"[a, b)"` or `"(a, b]"`.
    pub fn parse(s: &str) -> Result<Interval> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not an interval: {s:?}"));
        let lo_open = match s.chars().next() {
            Some('[') => false,
            Some('(') => true,
            _ => return Err(bad()),
        };
        let hi_open = match s.chars().last() {
            Some(']') => false,
            Some(')') => true,
            _ => return Err(bad()),
        };
        let body = &s[1..s.len() - 1];
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        Interval::new(parse(a)?, parse(b)?, lo_open, hi_open)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            format(&self.lo),
            format(&self.hi),
            if self.hi_open { ')' } else { ']' }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("1/8").unwrap(), ratio(1, 8));
        assert_eq!(parse("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(format(&ratio(4, 2)), "2");
        assert_eq!(format(&ratio(-1, 8)), "-1/8");
    }

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(3), int(8));
        assert_eq!(pow2(-8), ratio(1, 256));
        assert_eq!(pow2(0), int(1));
    }

    #[test]
    fn lattice_range_respects_open_ends() {
        let w = Interval::closed(int(0), int(1));
        assert_eq!(
            w.lattice_range(2, &int(0)),
            Some((BigInt::from(0), BigInt::from(2)))
        );
        let w = Interval::open(int(0), int(1));
        assert_eq!(
            w.lattice_range(2, &int(0)),
            Some((BigInt::from(1), BigInt::from(1)))
        );
        let w = Interval::open(ratio(1, 10), ratio(2, 10));
        assert_eq!(w.lattice_range(2, &int(0)), None);
    }

    #[test]
    fn subset_and_intersection() {
        let a = Interval::closed_open(int(1), int(2));
        let b = Interval::open(int(1), int(3));
        assert!(!a.is_subset_of(&b));
        assert!(Interval::open(int(1), int(2)).is_subset_of(&b));
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, Interval::open(int(1), int(2)));
        assert!(Interval::closed(int(0), int(1))
            .intersect(&Interval::open(int(1), int(2)))
            .is_none());
    }

    #[test]
    fn parse_interval() {
        let w = Interval::parse("[-1/2, 3)").unwrap();
        assert_eq!(w, Interval::closed_open(ratio(-1, 2), int(3)));
        assert_eq!(w.to_string(), "[-1/2, 3)");
        assert!(Interval::parse("[2, 1]").is_err());
    }

    #[test]
    fn phase_is_reduced_exactly() {
        // (2^40 + 1/2) * 1: half a turn after an enormous integer part.
        let theta = int(1 << 40) + ratio(1, 2);
        let p = unit_phase(&theta);
        assert!((p.re + 1.0).abs() < 1e-15 && p.im.abs() < 1e-15);
    }

    #[test]
    fn log2_of_tiny_values() {
        assert_eq!(log2_abs(&pow2(-2000)), -2000.0);
        assert!((log2_abs(&ratio(3, 1)) - 3f64.log2()).abs() < 1e-15);
    }
}
