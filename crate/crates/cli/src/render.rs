//! JSON rendering. Every rational carries its exact `p/q` form next to a
//! rounded decimal.

use rankopt::exact_numeric::to_decimal;
use rankopt::Rational;
use serde_json::{json, Value};

pub const DECIMAL_PLACES: usize = 20;

pub fn rational(r: &Rational) -> Value {
    json!({
        "exact": format!("{}/{}", r.numer(), r.denom()),
        "decimal": to_decimal(r, DECIMAL_PLACES),
    })
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

/// 0-based observation indices shown 1-based.
pub fn indices(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|i| json!(i + 1)).collect())
}

pub fn pair((i, j): (usize, usize)) -> Value {
    json!([i + 1, j + 1])
}
