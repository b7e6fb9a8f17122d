//! Exact rational values.
//!
//! [`Value`] is an arbitrary-precision rational kept in canonical reduced
//! form. Small operands (numerator and denominator below 2^62) are handled
//! with `i128` intermediates; anything larger is promoted to a
//! [`BigRational`] and demoted again as soon as it fits. Because the
//! representation is canonical, derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

const SMALL_LIMIT: i128 = 1 << 62;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, denominator positive, both magnitudes below 2^62.
    Small(i64, i64),
    /// Reduced and too large for `Small`.
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Value(Repr);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseValueError {
    #[error("empty value string")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Value {
    pub fn zero() -> Self {
        Value(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Value(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_i128(n as i128, 1)
    }

    /// `numer / denom`. Panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_i128(numer as i128, denom as i128)
    }

    pub fn from_big(r: BigRational) -> Self {
        // BigRational::new already reduces; `from` on a raw ratio may not.
        let r = BigRational::new(r.numer().clone(), r.denom().clone());
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) if fits(n, d) => Value(Repr::Small(n as i64, d as i64)),
            _ => Value(Repr::Big(r)),
        }
    }

    fn from_i128(numer: i128, denom: i128) -> Self {
        debug_assert!(denom != 0);
        let g = numer.gcd(&denom);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (numer / g, denom / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        if fits(n, d) {
            Value(Repr::Small(n as i64, d as i64))
        } else {
            Value(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// Lossy conversion for display and statistics only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

fn fits(n: i128, d: i128) -> bool {
    n > -SMALL_LIMIT && n < SMALL_LIMIT && d > 0 && d < SMALL_LIMIT
}

fn add_values(a: &Value, b: &Value) -> Value {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
            if ad == bd {
                Value::from_i128(an + bn, ad)
            } else {
                Value::from_i128(an * bd + bn * ad, ad * bd)
            }
        }
        _ => Value::from_big(a.to_big() + b.to_big()),
    }
}

fn mul_values(a: &Value, b: &Value) -> Value {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            Value::from_i128(*an as i128 * *bn as i128, *ad as i128 * *bd as i128)
        }
        _ => Value::from_big(a.to_big() * b.to_big()),
    }
}

fn recip(v: &Value) -> Value {
    assert!(!v.is_zero(), "division by zero");
    match &v.0 {
        Repr::Small(n, d) => Value::from_i128(*d as i128, *n as i128),
        Repr::Big(r) => Value::from_big(r.recip()),
    }
}

impl Default for Value {
    fn default() -> Self {
        Value::zero()
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::from_int(n)
    }
}

impl From<i32> for Value {
    fn from(n: i32) -> Self {
        Value::from_int(n as i64)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::from_i128(n as i128, 1)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::from_i128(n as i128, 1)
    }
}

impl From<BigInt> for Value {
    fn from(n: BigInt) -> Self {
        Value::from_big(BigRational::from_integer(n))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $f:expr) => {
        impl $tr<&Value> for &Value {
            type Output = Value;
            fn $method(self, rhs: &Value) -> Value {
                $f(self, rhs)
            }
        }
        impl $tr<Value> for Value {
            type Output = Value;
            fn $method(self, rhs: Value) -> Value {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Value> for Value {
            type Output = Value;
            fn $method(self, rhs: &Value) -> Value {
                $f(&self, rhs)
            }
        }
        impl $tr<Value> for &Value {
            type Output = Value;
            fn $method(self, rhs: Value) -> Value {
                $f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_values);
binop!(Sub, sub, |a: &Value, b: &Value| add_values(a, &-b));
binop!(Mul, mul, mul_values);
binop!(Div, div, |a: &Value, b: &Value| mul_values(a, &recip(b)));

impl Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        match &self.0 {
            Repr::Small(n, d) => Value(Repr::Small(-n, *d)),
            Repr::Big(r) => Value(Repr::Big(-r)),
        }
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        -&self
    }
}

impl AddAssign<&Value> for Value {
    fn add_assign(&mut self, rhs: &Value) {
        *self = add_values(self, rhs);
    }
}

impl AddAssign<Value> for Value {
    fn add_assign(&mut self, rhs: Value) {
        *self = add_values(self, &rhs);
    }
}

impl SubAssign<&Value> for Value {
    fn sub_assign(&mut self, rhs: &Value) {
        *self = add_values(self, &-rhs);
    }
}

impl SubAssign<Value> for Value {
    fn sub_assign(&mut self, rhs: Value) {
        *self = add_values(self, &-rhs);
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::zero(), |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a Value> for Value {
    fn sum<I: Iterator<Item = &'a Value>>(iter: I) -> Value {
        iter.fold(Value::zero(), |acc, v| acc + v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Value {
    type Err = ParseValueError;

    /// Accepts integers (`"-16"`), fractions (`"9/2"`) and finite decimals
    /// (`"0.25"`, `"-1.5"`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseValueError::Empty);
        }
        let invalid = || ParseValueError::Invalid(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = parse_int(num.trim()).ok_or_else(invalid)?;
            let den: BigInt = parse_int(den.trim()).ok_or_else(invalid)?;
            if den.is_zero() {
                return Err(ParseValueError::ZeroDenominator(s.to_string()));
            }
            return Ok(Value::from_big(BigRational::new(num, den)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['-', '+']);
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            let digits = format!("{int_digits}{frac_part}");
            let mut numer: BigInt = digits.parse().map_err(|_| invalid())?;
            if negative {
                numer = -numer;
            }
            let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
            return Ok(Value::from_big(BigRational::new(numer, denom)));
        }
        let n = parse_int(s).ok_or_else(invalid)?;
        Ok(Value::from(n))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for Value {
    fn zero() -> Self {
        Value::zero()
    }
    fn is_zero(&self) -> bool {
        Value::is_zero(self)
    }
}

impl One for Value {
    fn one() -> Self {
        Value::one()
    }
}
