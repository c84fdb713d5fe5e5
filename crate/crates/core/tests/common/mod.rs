#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rankopt::{Dataset, Rational, ScoreVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn small_rational(rng: &mut ChaCha8Rng, range: i64, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    Rational::new(BigInt::from(rng.gen_range(-range * den..=range * den)), BigInt::from(den))
}

/// Random instance with deliberate degeneracies: shared x rows, collinear
/// triples and repeated hyperplanes show up regularly.
pub fn dataset(rng: &mut ChaCha8Rng, n: usize, p: usize, range: i64, max_den: i64) -> Dataset {
    loop {
        let mut x: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut y: Vec<Rational> = Vec::with_capacity(n);
        for i in 0..n {
            let mode = rng.gen_range(0..10);
            if i >= 2 && mode == 0 {
                // reuse an x row with a fresh y
                let k = rng.gen_range(0..i);
                x.push(x[k].clone());
                y.push(small_rational(rng, range, max_den));
            } else if i >= 2 && mode == 1 {
                // point on the line through two earlier points
                let a = rng.gen_range(0..i);
                let b = rng.gen_range(0..i);
                let t = int(rng.gen_range(-2..=2));
                x.push(x[a].iter().zip(&x[b]).map(|(u, v)| u + (v - u) * &t).collect());
                y.push(&y[a] + (&y[b] - &y[a]) * &t);
            } else {
                x.push((0..p).map(|_| small_rational(rng, range, max_den)).collect());
                y.push(small_rational(rng, range, max_den));
            }
        }
        let d = Dataset::new(x, y).expect("shape");
        if d.validate().is_ok() {
            return d;
        }
    }
}

/// Nondecreasing scores; zero-sum when asked.
pub fn scores(rng: &mut ChaCha8Rng, n: usize, zero_sum: bool, max_den: i64) -> ScoreVector {
    let mut v: Vec<Rational> = (0..n).map(|_| small_rational(rng, 3, max_den)).collect();
    v.sort();
    if zero_sum {
        let mean = v.iter().sum::<Rational>() / int(n as i64);
        for a in v.iter_mut() {
            *a -= &mean;
        }
    }
    ScoreVector::new(v).unwrap()
}

/// Arbitrary (not necessarily monotone) score vector.
pub fn any_scores(rng: &mut ChaCha8Rng, n: usize, max_den: i64) -> ScoreVector {
    ScoreVector::new((0..n).map(|_| small_rational(rng, 3, max_den)).collect()).unwrap()
}
