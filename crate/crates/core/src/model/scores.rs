use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::exact_numeric::Rational;
use crate::float::{self, Float};
use crate::model::{ScoreKind, ScoreVector};
use dashu_float::ops::SquareRoot;

pub const DEFAULT_SCORE_PRECISION: u32 = 64;

/// Scores `φ(i/(n+1))`, `i = 1..n`. Irrational values are truncated toward
/// zero at `precision` fractional bits, which keeps the vector antisymmetric.
pub fn score_coefficients(kind: ScoreKind, n: usize, precision: u32) -> Result<ScoreVector> {
    if n < 2 {
        return Err(CoreError::DimensionMismatch("scores need n >= 2".into()));
    }
    let values = (1..=n)
        .map(|i| {
            // centered rank 2i - n - 1 over 2(n + 1)
            let c = 2 * i as i64 - n as i64 - 1;
            match kind {
                ScoreKind::Sign => Rational::from_integer(BigInt::from(c.signum())),
                ScoreKind::Wilcoxon => wilcoxon(c, n, precision),
                ScoreKind::VanDerWaerden => {
                    if c > 0 {
                        -normal_quantile(&Rational::new((n + 1 - i).into(), (n + 1).into()), precision)
                    } else {
                        normal_quantile(&Rational::new(i.into(), (n + 1).into()), precision)
                    }
                }
            }
        })
        .collect();
    ScoreVector::new(values)
}

/// √3·c/(n+1) truncated toward zero.
fn wilcoxon(c: i64, n: usize, precision: u32) -> Rational {
    let scale = BigInt::from(1) << precision;
    let num = BigInt::from(3) * BigInt::from(c * c) * &scale * &scale;
    let den = BigInt::from((n as u64 + 1) * (n as u64 + 1));
    let mag = (num / den).sqrt();
    let mag = if c < 0 { -mag } else { mag };
    Rational::new(mag, scale)
}

/// Standard normal quantile `Φ⁻¹(u)` for `0 < u < 1`, truncated toward zero
/// at `precision` fractional bits.
pub fn normal_quantile(u: &Rational, precision: u32) -> Rational {
    assert!(u.is_positive() && u < &Rational::from_integer(1.into()), "quantile needs 0 < u < 1");
    let half = Rational::new(1.into(), 2.into());
    if *u == half {
        return Rational::zero();
    }
    if u > &half {
        return -normal_quantile(&(Rational::from_integer(1.into()) - u), precision);
    }
    let uf = float::to_f64(&float::from_rational(u, 64));
    let guess = quantile_f64(uf);
    let work = precision as usize + 64 + (guess * guess) as usize;
    let target = float::from_rational(u, work);
    let mut x = float::from_rational(&Rational::from_float(guess).expect("finite guess"), work);
    let pi = Float::pi(work);
    let inv_sqrt_2pi = float::from_i64(1, work) / (float::from_i64(2, work) * &pi).sqrt();
    let mut bits = 40usize;
    while bits < 2 * work {
        let (cdf, pdf) = cdf_pdf(&x, &pi, &inv_sqrt_2pi, work);
        x -= (cdf - &target) / pdf;
        bits *= 2;
    }
    let (cdf, pdf) = cdf_pdf(&x, &pi, &inv_sqrt_2pi, work);
    x -= (cdf - &target) / pdf;
    let exact = float::to_rational(&x);
    let scale = Rational::from_integer(BigInt::from(1) << precision);
    (exact * &scale).trunc() / scale
}

/// Φ(x) and φ(x) for x ≤ 0.
fn cdf_pdf(x: &Float, pi: &Float, inv_sqrt_2pi: &Float, prec: usize) -> (Float, Float) {
    let one = float::from_i64(1, prec);
    let two = float::from_i64(2, prec);
    let z = -x.clone() / two.clone().sqrt();
    let z2 = &z * &z;
    // erf(z) = 2/√π e^{-z²} Σ 2^k z^{2k+1} / (2k+1)!!
    let mut term = z.clone();
    let mut sum = z.clone();
    let eps = float::from_rational(&Rational::new(1.into(), BigInt::from(1) << (prec + 8)), prec);
    let mut k = 0i64;
    loop {
        k += 1;
        term = term * &z2 * &two / float::from_i64(2 * k + 1, prec);
        sum += &term;
        if term < eps.clone() * &sum {
            break;
        }
    }
    let gauss = (-z2).exp();
    let erf = two.clone() / pi.sqrt() * &gauss * sum;
    let cdf = (one - erf) / two;
    let pdf = inv_sqrt_2pi * &gauss;
    (cdf, pdf)
}

/// Bisection on a double precision Φ, good to about 40 bits.
fn quantile_f64(u: f64) -> f64 {
    let cdf = |x: f64| {
        let z = -x / std::f64::consts::SQRT_2;
        let mut term = z;
        let mut sum = z;
        let mut k = 0.0;
        while term > 1e-18 * sum {
            k += 1.0;
            term *= 2.0 * z * z / (2.0 * k + 1.0);
            sum += term;
        }
        0.5 - (-z * z).exp() * sum / std::f64::consts::PI.sqrt()
    };
    let (mut lo, mut hi) = (-40.0f64, 0.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
