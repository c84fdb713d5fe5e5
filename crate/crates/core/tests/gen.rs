mod common;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use rand::Rng;
use rankopt::gen_solver::{
    closed_cell_minimum, in_closed_cell, linear_piece, minimize_gen, CellMinimum, GenOptions,
    GenOutcome,
};
use rankopt::model::FnOracle;
use rankopt::reference::brute_min;
use rankopt::Rational;

/// Deterministic pseudo-random coefficients per permutation.
fn hashed(salt: u64, perm: &[usize]) -> Vec<Rational> {
    (0..perm.len())
        .map(|i| {
            let mut h = DefaultHasher::new();
            (salt, perm, i).hash(&mut h);
            let v = (h.finish() % 9) as i64 - 4;
            Rational::new(BigInt::from(v), BigInt::from(1 + (h.finish() >> 8) % 3))
        })
        .collect()
}

#[test]
fn arbitrary_oracles_agree_with_brute_force() {
    let mut unbounded = 0;
    for seed in 0..40u64 {
        let mut rng = common::rng(seed);
        let n = rng.gen_range(3..=5);
        let p = rng.gen_range(1..=2);
        let d = common::dataset(&mut rng, n, p, 4, 2);
        let oracle = FnOracle(move |perm: &[usize]| hashed(seed, perm));
        let options = GenOptions { seed, ..GenOptions::default() };
        let gen = minimize_gen(&d, &oracle, &options).unwrap();
        let brute = brute_min(&d, &oracle, 7).unwrap();
        assert_eq!(gen.outcome.is_unbounded(), brute.outcome.is_unbounded(), "seed {seed}");
        assert_eq!(gen.outcome.value(), brute.outcome.value(), "seed {seed}");
        assert_eq!(gen.stats.cells, brute.stats.cells, "seed {seed}");
        match gen.outcome {
            GenOutcome::Minimum { value, minimizer, cell } => {
                assert!(in_closed_cell(&d, &cell, &minimizer));
                assert_eq!(linear_piece(&d, &hashed(seed, &cell), &minimizer), value);
            }
            GenOutcome::Unbounded { cell } => {
                unbounded += 1;
                assert_eq!(closed_cell_minimum(&d, &cell, &hashed(seed, &cell)), CellMinimum::Unbounded);
            }
        }
    }
    assert!(unbounded > 0, "sample should include unbounded oracles");
}

#[test]
fn impure_oracle_is_rejected() {
    use std::cell::Cell;
    let mut rng = common::rng(1);
    let d = common::dataset(&mut rng, 4, 1, 3, 1);
    let calls = Cell::new(0i64);
    let oracle = FnOracle(|perm: &[usize]| {
        calls.set(calls.get() + 1);
        vec![Rational::from_integer(BigInt::from(calls.get())); perm.len()]
    });
    let err = minimize_gen(&d, &oracle, &GenOptions::default()).unwrap_err();
    assert!(matches!(err, rankopt::CoreError::OracleImpure));
}
