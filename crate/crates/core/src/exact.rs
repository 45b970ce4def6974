//! Exact integer and rational values, and the exact/real tagged union used by
//! the convolution layer.
//!
//! All exact arithmetic is checked: overflow of the 128-bit range is reported
//! as [`Error::Overflow`], never wrapped.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("rational with zero denominator"));
        }
        let g = gcd_i128(num, den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg().ok_or(Error::Overflow("rational sign"))?;
            den = den.checked_neg().ok_or(Error::Overflow("rational sign"))?;
        }
        Ok(Rational { num, den })
    }

    pub fn from_int(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn checked_add(self, rhs: Rational) -> Result<Rational> {
        let g = gcd_i128(self.den, rhs.den);
        let l = (self.den / g)
            .checked_mul(rhs.den)
            .ok_or(Error::Overflow("rational addition"))?;
        let a = self
            .num
            .checked_mul(l / self.den)
            .ok_or(Error::Overflow("rational addition"))?;
        let b = rhs
            .num
            .checked_mul(l / rhs.den)
            .ok_or(Error::Overflow("rational addition"))?;
        Rational::new(
            a.checked_add(b)
                .ok_or(Error::Overflow("rational addition"))?,
            l,
        )
    }

    pub fn checked_neg(self) -> Result<Rational> {
        Ok(Rational {
            num: self
                .num
                .checked_neg()
                .ok_or(Error::Overflow("rational negation"))?,
            den: self.den,
        })
    }

    pub fn checked_sub(self, rhs: Rational) -> Result<Rational> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_mul(self, rhs: Rational) -> Result<Rational> {
        // cross-reduce first to keep intermediates small
        let g1 = gcd_i128(self.num, rhs.den).max(1);
        let g2 = gcd_i128(rhs.num, self.den).max(1);
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .ok_or(Error::Overflow("rational multiplication"))?;
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .ok_or(Error::Overflow("rational multiplication"))?;
        Rational::new(num, den)
    }

    pub fn recip(self) -> Result<Rational> {
        Rational::new(self.den, self.num)
    }

    pub fn checked_div(self, rhs: Rational) -> Result<Rational> {
        self.checked_mul(rhs.recip()?)
    }

    /// `self^exp` for a signed exponent.
    pub fn checked_pow(self, exp: i32) -> Result<Rational> {
        let base = if exp < 0 { self.recip()? } else { self };
        let mut acc = Rational::ONE;
        for _ in 0..exp.unsigned_abs() {
            acc = acc.checked_mul(base)?;
        }
        Ok(acc)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // denominators are positive; widen through f64 only if the products overflow
        match (
            self.num.checked_mul(other.den),
            other.num.checked_mul(self.den),
        ) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// An exact value: a 128-bit integer or a reduced rational.
///
/// Rationals whose denominator reduces to 1 are normalized to `Int`, so the
/// variant always tells whether the value is integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactValue {
    Int(i128),
    Rational(Rational),
}

impl ExactValue {
    pub const ZERO: ExactValue = ExactValue::Int(0);
    pub const ONE: ExactValue = ExactValue::Int(1);

    pub fn from_rational(r: Rational) -> Self {
        if r.is_integer() {
            ExactValue::Int(r.numer())
        } else {
            ExactValue::Rational(r)
        }
    }

    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        Ok(Self::from_rational(Rational::new(num, den)?))
    }

    pub fn as_rational(&self) -> Rational {
        match *self {
            ExactValue::Int(n) => Rational::from_int(n),
            ExactValue::Rational(r) => r,
        }
    }

    pub fn as_int(&self) -> Option<i128> {
        match *self {
            ExactValue::Int(n) => Some(n),
            ExactValue::Rational(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactValue::Int(0))
    }

    pub fn checked_add(self, rhs: ExactValue) -> Result<ExactValue> {
        match (self, rhs) {
            (ExactValue::Int(a), ExactValue::Int(b)) => a
                .checked_add(b)
                .map(ExactValue::Int)
                .ok_or(Error::Overflow("integer addition")),
            _ => Ok(Self::from_rational(
                self.as_rational().checked_add(rhs.as_rational())?,
            )),
        }
    }

    pub fn checked_sub(self, rhs: ExactValue) -> Result<ExactValue> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_neg(self) -> Result<ExactValue> {
        match self {
            ExactValue::Int(a) => a
                .checked_neg()
                .map(ExactValue::Int)
                .ok_or(Error::Overflow("integer negation")),
            ExactValue::Rational(r) => Ok(ExactValue::Rational(r.checked_neg()?)),
        }
    }

    pub fn checked_mul(self, rhs: ExactValue) -> Result<ExactValue> {
        match (self, rhs) {
            (ExactValue::Int(a), ExactValue::Int(b)) => a
                .checked_mul(b)
                .map(ExactValue::Int)
                .ok_or(Error::Overflow("integer multiplication")),
            _ => Ok(Self::from_rational(
                self.as_rational().checked_mul(rhs.as_rational())?,
            )),
        }
    }

    pub fn checked_div(self, rhs: ExactValue) -> Result<ExactValue> {
        Ok(Self::from_rational(
            self.as_rational().checked_div(rhs.as_rational())?,
        ))
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            ExactValue::Int(n) => n as f64,
            ExactValue::Rational(r) => r.to_f64(),
        }
    }
}

impl From<i128> for ExactValue {
    fn from(n: i128) -> Self {
        ExactValue::Int(n)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Int(n) => write!(f, "{n}"),
            ExactValue::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// Exact or real value. Any operation involving a real operand yields a real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Exact(ExactValue),
    Real(f64),
}

impl Value {
    pub const ZERO: Value = Value::Exact(ExactValue::ZERO);
    pub const ONE: Value = Value::Exact(ExactValue::ONE);

    pub fn int(n: i128) -> Self {
        Value::Exact(ExactValue::Int(n))
    }

    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        Ok(Value::Exact(ExactValue::ratio(num, den)?))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn exact(&self) -> Option<ExactValue> {
        match *self {
            Value::Exact(e) => Some(e),
            Value::Real(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(e) => e.is_zero(),
            Value::Real(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(e) => e.to_f64(),
            Value::Real(x) => *x,
        }
    }

    pub fn checked_add(self, rhs: Value) -> Result<Value> {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(a.checked_add(b)?)),
            _ => Ok(Value::Real(self.to_f64() + rhs.to_f64())),
        }
    }

    pub fn checked_sub(self, rhs: Value) -> Result<Value> {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(a.checked_sub(b)?)),
            _ => Ok(Value::Real(self.to_f64() - rhs.to_f64())),
        }
    }

    pub fn checked_mul(self, rhs: Value) -> Result<Value> {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(a.checked_mul(b)?)),
            _ => Ok(Value::Real(self.to_f64() * rhs.to_f64())),
        }
    }

    pub fn checked_div(self, rhs: Value) -> Result<Value> {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(a.checked_div(b)?)),
            _ => Ok(Value::Real(self.to_f64() / rhs.to_f64())),
        }
    }

    pub fn checked_neg(self) -> Result<Value> {
        match self {
            Value::Exact(a) => Ok(Value::Exact(a.checked_neg()?)),
            Value::Real(x) => Ok(Value::Real(-x)),
        }
    }
}

impl From<ExactValue> for Value {
    fn from(e: ExactValue) -> Self {
        Value::Exact(e)
    }
}

impl From<i128> for Value {
    fn from(n: i128) -> Self {
        Value::int(n)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(e) => write!(f, "{e}"),
            Value::Real(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rationals_are_reduced_with_positive_denominator() {
        let r = Rational::new(6, -4).unwrap();
        assert_eq!((r.numer(), r.denom()), (-3, 2));
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn integral_rationals_normalize_to_int() {
        assert_eq!(ExactValue::ratio(6, 3).unwrap(), ExactValue::Int(2));
        let half = ExactValue::ratio(1, 2).unwrap();
        assert_eq!(half.checked_add(half).unwrap(), ExactValue::Int(1));
        assert!(matches!(half, ExactValue::Rational(_)));
    }

    #[test]
    fn overflow_is_an_error() {
        let big = ExactValue::Int(i128::MAX);
        assert_eq!(
            big.checked_add(ExactValue::ONE),
            Err(Error::Overflow("integer addition"))
        );
        assert!(big.checked_mul(ExactValue::Int(2)).is_err());
    }

    #[test]
    fn mixing_exact_and_real_promotes() {
        let v = Value::int(3).checked_mul(Value::Real(0.5)).unwrap();
        assert_eq!(v, Value::Real(1.5));
        let e = Value::int(3).checked_div(Value::int(6)).unwrap();
        assert_eq!(e, Value::ratio(1, 2).unwrap());
    }

    proptest! {
        #[test]
        fn field_laws_hold_on_small_rationals(
            a in -1000i128..1000, b in 1i128..1000,
            c in -1000i128..1000, d in 1i128..1000,
        ) {
            let x = Rational::new(a, b).unwrap();
            let y = Rational::new(c, d).unwrap();
            let sum = x.checked_add(y).unwrap();
            prop_assert_eq!(sum, Rational::new(a * d + c * b, b * d).unwrap());
            prop_assert_eq!(sum.checked_sub(y).unwrap(), x);
            let prod = x.checked_mul(y).unwrap();
            prop_assert_eq!(prod, Rational::new(a * c, b * d).unwrap());
            if c != 0 {
                prop_assert_eq!(prod.checked_div(y).unwrap(), x);
            }
        }
    }
}
