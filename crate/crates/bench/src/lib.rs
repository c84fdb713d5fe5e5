//! Seeded instances shared by the benchmarks.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankopt::{Dataset, Rational, ScoreVector};

fn small(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    let den = rng.gen_range(1..=3);
    Rational::new(BigInt::from(rng.gen_range(-range * den..=range * den)), BigInt::from(den))
}

/// Random instance in general position with small rational entries.
pub fn dataset(n: usize, p: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let x = (0..n).map(|_| (0..p).map(|_| small(&mut rng, 5)).collect()).collect();
        let y = (0..n).map(|_| small(&mut rng, 5)).collect();
        let d = Dataset::new(x, y).expect("rectangular");
        if d.validate().is_ok() {
            return d;
        }
    }
}

/// Centred integer scores `2i - n - 1`.
pub fn centred_scores(n: usize) -> ScoreVector {
    let v = (1..=n as i64)
        .map(|i| Rational::from_integer(BigInt::from(2 * i - n as i64 - 1)))
        .collect();
    ScoreVector::new(v).expect("nonempty")
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
