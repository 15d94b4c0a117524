use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// An exact value. `Int(n)` and `Rational(n/1)` are the same number.
#[derive(Clone, Debug)]
pub enum Value {
    Int(BigInt),
    Rational(BigRational),
    Bool(bool),
}

impl Value {
    pub fn int(n: impl Into<BigInt>) -> Value {
        Value::Int(n.into())
    }

    pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Value {
        Value::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Value::Int(n) => Some(BigRational::from_integer(n.clone())),
            Value::Rational(r) => Some(r.clone()),
            Value::Bool(_) => None,
        }
    }

    /// Integer value of an `Int`, or of a `Rational` with denominator 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            Value::Int(n) => Some(n.clone()),
            Value::Rational(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        !matches!(self, Value::Bool(_))
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Int(a), Value::Int(b)) => a == b,
            (a, b) => match (a.to_rational(), b.to_rational()) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
        }
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => Some(a.cmp(b)),
            (Value::Bool(a), Value::Bool(b)) => Some(a.cmp(b)),
            (a, b) => Some(a.to_rational()?.cmp(&b.to_rational()?)),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Rational(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            Value::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Integer division: floor for a positive divisor, ceiling for a negative one.
/// `None` for a zero divisor.
pub fn euclid_div(n: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_zero() {
        return None;
    }
    let q = n.div_floor(&m.abs());
    Some(if m.is_negative() { -q } else { q })
}

/// Remainder matching [`euclid_div`], always in `[0, |m|)`.
pub fn euclid_mod(n: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_zero() {
        return None;
    }
    Some(n.mod_floor(&m.abs()))
}
