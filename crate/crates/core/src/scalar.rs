//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `[numerator, denominator]` as JSON numbers, falling back to decimal
/// strings when a part does not fit in an `i64`.
pub fn to_json(x: &Q) -> Value {
    let part = |b: &BigInt| b.to_i64().map(Value::from).unwrap_or_else(|| Value::String(b.to_string()));
    Value::Array(vec![part(x.numer()), part(x.denom())])
}

pub fn from_json(v: &Value) -> Option<Q> {
    let arr = v.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    let part = |v: &Value| -> Option<BigInt> {
        match v {
            Value::Number(n) => n.as_i64().map(BigInt::from),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
    };
    let d = part(&arr[1])?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(part(&arr[0])?, d))
}

/// Short human form: `3`, `-1/2`.
pub fn show(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn sign_of(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
