//! Binary floating point with caller-chosen mantissa length, and exact
//! conversions to and from rationals.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact_numeric::Rational;

pub type Float = FBig<HalfEven, 2>;

pub fn to_ibig(v: &BigInt) -> IBig {
    IBig::from_le_bytes(&v.to_signed_bytes_le())
}

pub fn to_bigint(v: &IBig) -> BigInt {
    BigInt::from_signed_bytes_le(&v.to_le_bytes())
}

pub fn from_int(v: &BigInt, prec: usize) -> Float {
    Float::from(to_ibig(v)).with_precision(prec).value()
}

pub fn from_i64(v: i64, prec: usize) -> Float {
    Float::from(v).with_precision(prec).value()
}

pub fn from_rational(r: &Rational, prec: usize) -> Float {
    from_int(r.numer(), prec) / from_int(r.denom(), prec)
}

/// `(m, e)` with value `m·2^e`.
pub fn parts(x: &Float) -> (BigInt, isize) {
    let repr = x.repr();
    (to_bigint(repr.significand()), repr.exponent())
}

/// Exact value of a binary float.
pub fn to_rational(x: &Float) -> Rational {
    let (m, e) = parts(x);
    if m.is_zero() {
        return Rational::zero();
    }
    if e >= 0 {
        Rational::from_integer(m << e as usize)
    } else {
        Rational::new(m, BigInt::one() << (-e) as usize)
    }
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}
