//! Exact rational helpers: bit sizes, the explicit bound set used by the
//! ellipsoid-based solver, and continued-fraction rounding.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::model::{Dataset, ScoreVector};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Binary digits of |v|, counting zero as one digit.
pub fn digits(v: &BigInt) -> u64 {
    v.bits().max(1)
}

/// Encoding length of a reduced fraction: sign bit plus numerator and
/// denominator digits.
pub fn bitsize(r: &Rational) -> u64 {
    digits(r.numer()) + digits(r.denom()) + 1
}

pub fn instance_bitsize(x: &[Vec<Rational>], y: &[Rational], alpha: &[Rational]) -> Result<u64> {
    if alpha.is_empty() {
        return Err(CoreError::EmptyScores);
    }
    if y.len() != x.len() || alpha.len() != x.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "X has {} rows, y has {}, alpha has {}",
            x.len(),
            y.len(),
            alpha.len()
        )));
    }
    let p = x.first().map_or(0, Vec::len);
    if x.iter().any(|row| row.len() != p) {
        return Err(CoreError::DimensionMismatch("ragged X".into()));
    }
    Ok(x.iter().flatten().chain(y).chain(alpha).map(bitsize).sum())
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn ceil_sqrt(v: &BigInt) -> BigInt {
    let r = v.sqrt();
    if &(&r * &r) < v {
        r + 1
    } else {
        r
    }
}

pub fn ceil_log2(v: &BigInt) -> u64 {
    if *v <= BigInt::one() {
        0
    } else {
        (v - 1u32).bits()
    }
}

pub fn ceil_rational(v: &Rational) -> BigInt {
    v.ceil().to_integer()
}

pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Exponents that drive the ellipsoid-based solver.
///
/// `q` bounds the bit size of every vertex and of the optimum value,
/// `q1` is the blow-up exponent (δ = 2^-q1), `q2` the volume exponent and
/// `q3` the half-width exponent of the initial box. `l` is the instance
/// bit size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    pub l: u64,
    pub q: u64,
    pub q1: u64,
    pub q2: u64,
    pub q3: u64,
}

/// Integer data shared by the bound formulas.
struct Magnitudes {
    n: usize,
    p: usize,
    lam: BigInt,
    lam_alpha: BigInt,
    a_x: BigInt,
    a_h: BigInt,
    a_alpha: BigInt,
    hadamard: BigInt,
    k: BigInt,
}

fn magnitudes(data: &Dataset, scores: &ScoreVector) -> Magnitudes {
    let n = data.n();
    let p = data.p();
    let lam = lcm_of_denominators(data.x().iter().flatten().chain(data.y()));
    let lam_r = Rational::from_integer(lam.clone());
    let xs: Vec<Vec<BigInt>> = data
        .x()
        .iter()
        .map(|row| row.iter().map(|v| (v * &lam_r).to_integer()).collect())
        .collect();
    let ys: Vec<BigInt> = data.y().iter().map(|v| (v * &lam_r).to_integer()).collect();
    let a_x = xs.iter().flatten().map(|v| v.abs()).max().unwrap_or_default();
    let mut a_h = BigInt::one();
    let mut w1 = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..p {
                a_h = a_h.max((&xs[i][k] - &xs[j][k]).abs());
            }
            a_h = a_h.max((&ys[i] - &ys[j]).abs());
            let l1: Rational = (0..p).map(|k| (&data.x()[i][k] - &data.x()[j][k]).abs()).sum();
            w1 = w1.max(l1);
        }
    }
    let pp = BigInt::from(p);
    let hadamard = ceil_sqrt(&(num_traits::pow(pp, p) * num_traits::pow(a_h.clone(), 2 * p)))
        .max(BigInt::one());
    let alpha = scores.values();
    let lam_alpha = lcm_of_denominators(alpha);
    let a_alpha = alpha
        .iter()
        .map(|a| (a * Rational::from_integer(lam_alpha.clone())).to_integer().abs())
        .max()
        .unwrap_or_default();
    let sum_abs_alpha: Rational = alpha.iter().map(|a| a.abs()).sum();
    let max_row_l1 = data
        .x()
        .iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<Rational>())
        .max()
        .unwrap_or_default();
    let g1 = sum_abs_alpha * max_row_l1;
    let k = ceil_rational(&g1.max(w1).max(Rational::one()));
    Magnitudes {
        n,
        p,
        lam,
        lam_alpha,
        a_x,
        a_h,
        a_alpha,
        hadamard,
        k,
    }
}

/// Computes the bound set for a validated instance.
pub fn compute_bounds(data: &Dataset, scores: &ScoreVector) -> Result<BoundSet> {
    let l = instance_bitsize(data.x(), data.y(), scores.values())?;
    let m = magnitudes(data, scores);
    let n = BigInt::from(data.n());
    let a_y = {
        let lam_r = Rational::from_integer(m.lam.clone());
        data.y()
            .iter()
            .map(|v| (v * &lam_r).to_integer().abs())
            .max()
            .unwrap_or_default()
    };
    // every coordinate of a vertex is a ratio of integers bounded by the Hadamard bound
    let vertex_bits = m.p as u64 * (2 * digits(&m.hadamard) + 1);
    let t_num = &n * &m.a_alpha * &m.hadamard * (&a_y + BigInt::from(m.p) * &m.a_x);
    let t_den = &m.lam * &m.lam_alpha * &m.hadamard;
    let value_bits = digits(&t_num) + digits(&t_den) + 1;
    let q = vertex_bits.max(value_bits);
    Ok(derive(l, q, &m))
}

/// Bound set derived from a caller-chosen `q` (used by the fast mode).
pub fn bounds_for_q(data: &Dataset, scores: &ScoreVector, q: u64) -> Result<BoundSet> {
    let l = instance_bitsize(data.x(), data.y(), scores.values())?;
    Ok(derive(l, q, &magnitudes(data, scores)))
}

fn derive(l: u64, q: u64, m: &Magnitudes) -> BoundSet {
    let p = m.p;
    let scale = &m.lam * &m.lam_alpha;
    let g_entry = BigInt::from(m.n) * &m.a_alpha * &m.a_x;
    // squared norms of the integer-scaled constraint rows [normal | -scale]
    let g_row = BigInt::from(p) * &g_entry * &g_entry + &scale * &scale;
    let w_row = BigInt::from(p) * &m.a_h * &m.a_h + &m.lam * &m.lam;
    let row = g_row.max(w_row).max(BigInt::one());
    let det = ceil_sqrt(&num_traits::pow(row, p + 1));
    let q1 = (2 * q + 1) + digits(&det) + 1;
    let q2 = p as u64 * (q1 + digits(&m.k));
    let reach = &m.hadamard * (BigInt::one() + (pow2(q + 1) + 1) * &scale);
    let q3 = digits(&(reach + 1)) + 1;
    BoundSet { l, q, q1, q2, q3 }
}

/// Returns the unique fraction with denominator at most `m` whose distance
/// to `gamma` is below 1/(2m^2), if one exists.
pub fn diophantine_approx(gamma: &Rational, m: &BigInt) -> Option<Rational> {
    if !m.is_positive() {
        return None;
    }
    let bound = Rational::new(BigInt::one(), BigInt::from(2) * m * m);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut num = gamma.numer().clone();
    let mut den = gamma.denom().clone();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if &k_next > m {
            break;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let conv = Rational::new(h.clone(), k.clone());
        if (gamma - &conv).abs() < bound {
            return Some(conv);
        }
        num = std::mem::replace(&mut den, r);
    }
    None
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Decimal rendering with `places` digits after the point, rounded half away from zero.
pub fn to_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = (r * Rational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
