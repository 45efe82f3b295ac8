//! Exact rational numbers.
//!
//! Values that fit in a pair of machine words are kept inline; anything
//! larger is promoted to an arbitrary-precision [`BigRational`]. The
//! representation is canonical (reduced, positive denominator, inline
//! whenever it fits), so structural equality and hashing agree with
//! numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

#[derive(Clone)]
enum Repr {
    /// Reduced, `den > 0`.
    Small(i64, i64),
    /// Reduced and too large for `Small`.
    Big(Box<BigRational>),
}

/// An exact fraction in canonical form.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl Rational {
    pub const ZERO: Rational = Rational(Repr::Small(0, 1));
    pub const ONE: Rational = Rational(Repr::Small(1, 1));

    /// Builds `p/q` in canonical form.
    pub fn new(p: i64, q: i64) -> Result<Self, RationalError> {
        if q == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self::from_i128(p as i128, q as i128))
    }

    pub fn from_integer(p: i64) -> Self {
        Rational(Repr::Small(p, 1))
    }

    /// `p/q` with `q != 0`; panics otherwise. Convenience for literals.
    pub fn frac(p: i64, q: i64) -> Self {
        Self::new(p, q).expect("nonzero denominator")
    }

    /// Builds `p/q` from big integers.
    pub fn from_bigints(p: BigInt, q: BigInt) -> Result<Self, RationalError> {
        if q.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self::from_big(BigRational::new(p, q)))
    }

    fn from_i128(p: i128, q: i128) -> Self {
        debug_assert!(q != 0);
        let g = gcd_i128(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        match (i64::try_from(p), i64::try_from(q)) {
            (Ok(p), Ok(q)) => Rational(Repr::Small(p, q)),
            _ => Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(p),
                BigInt::from(q),
            )))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new already reduces and fixes the sign.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(p), Some(q)) => Rational(Repr::Small(p, q)),
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(p, q) => BigRational::new_raw(BigInt::from(*p), BigInt::from(*q)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(p, _) => BigInt::from(*p),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, q) => BigInt::from(*q),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// Numerator and denominator when both fit in `i64`.
    pub fn to_small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(p, q) => Some((p, q)),
            Repr::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.0, Repr::Small(_, 1))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(p, _) => *p < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    /// True when `0 <= self <= 1`.
    pub fn is_unit_interval(&self) -> bool {
        !self.is_negative() && *self <= Rational::ONE
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `|self - other|`.
    pub fn abs_diff(&self, other: &Rational) -> Self {
        (self - other).abs()
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        &Rational::ONE - self
    }

    pub fn recip(&self) -> Result<Self, RationalError> {
        if self.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(match &self.0 {
            Repr::Small(p, q) => Self::from_i128(*q as i128, *p as i128),
            Repr::Big(b) => Self::from_big(b.recip()),
        })
    }

    /// `self / r` for a positive integer `r`.
    pub fn div_int(&self, r: u64) -> Self {
        assert!(r > 0, "division by zero");
        match &self.0 {
            Repr::Small(p, q) => Self::from_i128(*p as i128, *q as i128 * r as i128),
            Repr::Big(b) => Self::from_big(&**b / BigRational::from_integer(BigInt::from(r))),
        }
    }

    /// `self * r` for an integer `r`.
    pub fn mul_int(&self, r: i64) -> Self {
        match &self.0 {
            Repr::Small(p, q) => Self::from_i128(*p as i128 * r as i128, *q as i128),
            Repr::Big(b) => Self::from_big(&**b * BigRational::from_integer(BigInt::from(r))),
        }
    }

    /// Compares `self / r` with `other` without building the quotient.
    pub fn cmp_div_int(&self, r: u64, other: &Rational) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(p, q), Repr::Small(a, b)) => {
                // p/(q r) vs a/b  <=>  p b vs a q r  (all denominators positive)
                let lhs = *p as i128 * *b as i128;
                match (*a as i128 * *q as i128).checked_mul(r as i128) {
                    Some(rhs) => lhs.cmp(&rhs),
                    None => self.div_int(r).cmp(other),
                }
            }
            _ => self.div_int(r).cmp(other),
        }
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(p, q) => BigInt::from(p.div_floor(q)),
            Repr::Big(b) => b.floor().to_integer(),
        }
    }

    /// Largest `r` with `self / r >= 1/k`, i.e. `floor(k * self)`, as `u64`.
    pub fn floor_times(&self, k: u64) -> u64 {
        match &self.0 {
            Repr::Small(p, q) if *p >= 0 => {
                let v = (*p as i128 * k as i128) / *q as i128;
                u64::try_from(v).unwrap_or(u64::MAX)
            }
            _ => {
                let v = (self.to_big() * BigRational::from_integer(BigInt::from(k)))
                    .floor()
                    .to_integer();
                if v.is_negative() {
                    0
                } else {
                    v.to_u64().unwrap_or(u64::MAX)
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(p, q) => *p as f64 / *q as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            // canonical: a value has exactly one representation
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(p, q) => {
                0u8.hash(state);
                p.hash(state);
                q.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let num = *a as i128 * *d as i128 + *c as i128 * *b as i128;
            return Rational::from_i128(num, *b as i128 * *d as i128);
        }
        Rational::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let num = *a as i128 * *d as i128 - *c as i128 * *b as i128;
            return Rational::from_i128(num, *b as i128 * *d as i128);
        }
        Rational::from_big(self.to_big() - rhs.to_big())
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            return Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Rational::from_big(self.to_big() * rhs.to_big())
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            return Rational::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128);
        }
        Rational::from_big(self.to_big() / rhs.to_big())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(p, q) => Rational::from_i128(-(*p as i128), *q as i128),
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::ZERO, |acc, x| &acc + x)
    }
}

impl From<i64> for Rational {
    fn from(p: i64) -> Self {
        Rational::from_integer(p)
    }
}

impl fmt::Display for Rational {
    /// Always `p/q`, including integers (`0/1`, `1/1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(p, q) => write!(f, "{p}/{q}"),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalError::Parse(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        if p.is_empty() || q.is_empty() {
            return Err(bad());
        }
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational::from_big(BigRational::new(p, q)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Least common multiple of the denominators, if it fits in `u64`.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Option<u64> {
    let mut l: u64 = 1;
    for v in values {
        let (_, q) = v.to_small()?;
        let q = q as u64;
        let g = l.gcd(&q);
        l = (l / g).checked_mul(q)?;
    }
    Some(l)
}

/// `value * scale` when that is an integer that fits in `u64`.
pub fn scaled_numerator(value: &Rational, scale: u64) -> Option<u64> {
    let (p, q) = value.to_small()?;
    if p < 0 || !scale.is_multiple_of(q as u64) {
        return None;
    }
    (p as u64).checked_mul(scale / q as u64)
}

impl One for Rational {
    fn one() -> Self {
        Rational::ONE
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}
