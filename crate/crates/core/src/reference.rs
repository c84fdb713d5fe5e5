//! Exhaustive ground truth for small instances.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::arrangement::Arrangement;
use crate::error::{CoreError, Result};
use crate::exact_numeric::Rational;
use crate::gen_solver::{GenSolution, Tracker};
use crate::lp_exact::{rank, solve_equalities, LinearProgram, LpOutcome};
use crate::model::{CoefficientOracle, Dataset};

pub const DEFAULT_PERMUTATION_CAP: usize = 7;

fn check_cap(data: &Dataset, cap: usize) -> Result<()> {
    if data.n() > cap {
        return Err(CoreError::PermutationLimitExceeded { n: data.n(), cap });
    }
    Ok(())
}

/// Whether the ordering `perm` has a full-dimensional cell.
pub fn is_full_cell(data: &Dataset, perm: &[usize]) -> bool {
    let p = data.p();
    let x = data.x();
    let y = data.y();
    let mut obj = vec![Rational::zero(); p + 1];
    obj[p] = Rational::one();
    let mut lp = LinearProgram::maximize(obj.clone());
    for w in perm.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut row: Vec<Rational> = x[b].iter().zip(&x[a]).map(|(u, v)| u - v).collect();
        row.push(Rational::one());
        lp.le(row, &y[b] - &y[a]);
    }
    lp.le(obj, Rational::one());
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded { .. } => true,
        LpOutcome::Infeasible => false,
    }
}

pub fn brute_cells(data: &Dataset, cap: usize) -> Result<BTreeSet<Vec<usize>>> {
    check_cap(data, cap)?;
    let n = data.n();
    Ok((0..n)
        .permutations(n)
        .filter(|perm| is_full_cell(data, perm))
        .collect())
}

/// Intersection points of `p` linearly independent distinct hyperplanes.
pub fn brute_vertices(data: &Dataset) -> BTreeSet<Vec<Rational>> {
    let arr = Arrangement::new(data);
    let p = data.p();
    let planes: Vec<_> = arr.distinct_hyperplanes().collect();
    let mut out = BTreeSet::new();
    for subset in planes.iter().combinations(p) {
        let w: Vec<Vec<Rational>> = subset.iter().map(|h| h.normal.clone()).collect();
        if rank(&w) < p {
            continue;
        }
        let z: Vec<Rational> = subset.iter().map(|h| h.offset.clone()).collect();
        let v = solve_equalities(&w, &z, p).expect("independent square system");
        out.insert(v);
    }
    out
}

/// Minimum over the closures of all full-dimensional cells.
pub fn brute_min<O: CoefficientOracle + ?Sized>(
    data: &Dataset,
    oracle: &O,
    cap: usize,
) -> Result<GenSolution> {
    data.validate()?;
    let cells = brute_cells(data, cap)?;
    let mut tracker = Tracker::new(oracle, None);
    for perm in &cells {
        tracker.visit(data, perm)?;
    }
    tracker.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numeric::int;
    use crate::gen_solver::GenOutcome;
    use crate::model::ScoreVector;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn column(xs: &[i64], ys: &[i64]) -> Dataset {
        Dataset::new(xs.iter().map(|&x| ints(&[x])).collect(), ints(ys)).unwrap()
    }

    #[test]
    fn collinear_cells_and_vertices() {
        let d = column(&[1, 2, 3], &[1, 2, 3]);
        let cells: Vec<_> = brute_cells(&d, 7).unwrap().into_iter().collect();
        assert_eq!(cells, vec![vec![0, 1, 2], vec![2, 1, 0]]);
        let verts: Vec<_> = brute_vertices(&d).into_iter().collect();
        assert_eq!(verts, vec![ints(&[1])]);
    }

    #[test]
    fn constant_gap_orders_filtered() {
        let d = column(&[1, 1, 2], &[0, 5, 1]);
        let cells = brute_cells(&d, 7).unwrap();
        assert!(cells.iter().all(|perm| {
            let a = perm.iter().position(|&v| v == 0).unwrap();
            let b = perm.iter().position(|&v| v == 1).unwrap();
            a < b
        }));
        assert!(!cells.is_empty());
    }

    #[test]
    fn parallel_lines_have_no_vertices() {
        let d = Dataset::new(
            vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[2, 0])],
            ints(&[0, 0, 1]),
        )
        .unwrap();
        assert!(brute_vertices(&d).is_empty());
    }

    #[test]
    fn minima() {
        let d = column(&[1, 2, 3], &[1, 2, 3]);
        let a = ScoreVector::new(ints(&[-1, 0, 1])).unwrap();
        let sol = brute_min(&d, &a, 7).unwrap();
        assert_eq!(
            sol.outcome,
            GenOutcome::Minimum {
                value: int(0),
                minimizer: ints(&[1]),
                cell: vec![0, 1, 2]
            }
        );
        let d = column(&[1, 2], &[0, 0]);
        let a = ScoreVector::new(ints(&[1, 2])).unwrap();
        assert!(brute_min(&d, &a, 7).unwrap().outcome.is_unbounded());
        let big = Dataset::new((0..8).map(|i| ints(&[i])).collect(), ints(&[0; 8])).unwrap();
        let a = ScoreVector::new(ints(&[0; 8])).unwrap();
        assert!(matches!(
            brute_min(&big, &a, 7),
            Err(CoreError::PermutationLimitExceeded { n: 8, cap: 7 })
        ));
    }
}
