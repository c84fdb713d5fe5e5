use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rankopt::exact_numeric::{bitsize, diophantine_approx};
use rankopt::lp_exact::{LinearProgram, LpOutcome};
use rankopt::Rational;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn diophantine_recovers_fraction(
        m in 1i64..=1_000_000,
        den_frac in 0.0f64..1.0,
        num in -1_000_000i64..=1_000_000,
        off in -999i64..=999,
    ) {
        let den = 1 + ((m - 1) as f64 * den_frac) as i64;
        let target = r(num, den);
        // offset strictly inside 1/(2M^2)
        let delta = Rational::new(BigInt::from(off), BigInt::from(2000) * BigInt::from(m) * BigInt::from(m));
        let got = diophantine_approx(&(&target + delta), &BigInt::from(m));
        prop_assert_eq!(got, Some(target));
    }

    #[test]
    fn bitsize_is_sign_blind(n in -10_000i64..=10_000, d in 1i64..=10_000) {
        prop_assert_eq!(bitsize(&r(n, d)), bitsize(&r(-n, d)));
    }

    #[test]
    fn lp_optimum_is_feasible_and_dominates_vertices(
        c in prop::collection::vec(-5i64..=5, 2),
        rows in prop::collection::vec((prop::collection::vec(-4i64..=4, 2), 0i64..=6), 1..6),
    ) {
        // box keeps every program bounded
        let obj: Vec<Rational> = c.iter().map(|&v| r(v, 1)).collect();
        let mut lp = LinearProgram::maximize(obj.clone());
        for j in 0..2 {
            let mut e = vec![r(0, 1); 2];
            e[j] = r(1, 1);
            lp.le(e.clone(), r(10, 1));
            e[j] = r(-1, 1);
            lp.le(e, r(10, 1));
        }
        for (a, b) in &rows {
            lp.le(a.iter().map(|&v| r(v, 1)).collect(), r(*b, 1));
        }
        let LpOutcome::Optimal { value, point } = lp.solve() else {
            panic!("origin is feasible and the box is bounded");
        };
        for con in lp.constraints() {
            let lhs: Rational = con.coeffs.iter().zip(&point).map(|(a, x)| a * x).sum();
            prop_assert!(lhs <= con.rhs);
        }
        let at: Rational = obj.iter().zip(&point).map(|(a, x)| a * x).sum();
        prop_assert_eq!(&at, &value);
        // grid points inside the region never beat the optimum
        for gx in -10..=10 {
            for gy in -10..=10 {
                let g = [r(gx, 1), r(gy, 1)];
                let inside = rows.iter().all(|(a, b)| a[0] * gx + a[1] * gy <= *b);
                if inside {
                    let v: Rational = obj.iter().zip(&g).map(|(a, x)| a * x).sum();
                    prop_assert!(v <= value);
                }
            }
        }
    }
}

#[test]
fn diophantine_is_unique_for_small_bounds() {
    // every fraction within 1/(2M^2) of gamma is the one returned
    for m in 1i64..=30 {
        let tol = Rational::new(BigInt::one(), BigInt::from(2 * m * m));
        for g in 0..=4 * m * m {
            let gamma = r(g, 4 * m * m) + r(1, 8 * m * m * 7);
            let got = diophantine_approx(&gamma, &BigInt::from(m));
            let mut near = Vec::new();
            for d in 1..=m {
                let k = (&gamma * BigInt::from(d)).round().to_integer();
                for kk in [&k - 1, k.clone(), &k + 1] {
                    let cand = Rational::new(kk, BigInt::from(d));
                    if (&cand - &gamma).abs() < tol && !near.contains(&cand) {
                        near.push(cand);
                    }
                }
            }
            assert!(near.len() <= 1, "gamma {gamma} m {m}: {near:?}");
            assert_eq!(got, near.pop(), "gamma {gamma} m {m}");
        }
    }
}
