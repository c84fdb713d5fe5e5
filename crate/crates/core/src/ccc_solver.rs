//! Exact minimization of convex rank criteria (nondecreasing scores):
//! unboundedness test, bisection on the optimal value with the ellipsoid
//! oracle, rational snapping, and extraction of a minimal face.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::exact_numeric::{bounds_for_q, compute_bounds, diophantine_approx, BoundSet, Rational};
use crate::lp_exact::{rank, solve_equalities, LinearProgram, LpOutcome};
use crate::model::{eval_f, residuals, Dataset, ScoreVector};
use crate::ellipsoid_oracle::{oracle_a, OracleConfig, OracleQuery, Verdict};

#[derive(Clone, Debug, PartialEq)]
pub enum CccOutcome {
    Minimum {
        t0: Rational,
        beta0: Vec<Rational>,
        /// Affine hull of the minimal face: `W β = z`, one row per kept pair.
        face_w: Vec<Vec<Rational>>,
        face_z: Vec<Rational>,
        face_pairs: Vec<(usize, usize)>,
    },
    Unbounded,
}

impl CccOutcome {
    pub fn t0(&self) -> Option<&Rational> {
        match self {
            CccOutcome::Minimum { t0, .. } => Some(t0),
            CccOutcome::Unbounded => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CccStats {
    pub oracle_calls: usize,
    pub bisection_steps: usize,
    pub ellipsoid_cuts: usize,
    pub precision_retries: usize,
    /// Face rows decided without an oracle call (already implied or contradicted).
    pub face_shortcuts: usize,
    pub fast_mode: bool,
    pub fell_back: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CccSolution {
    pub outcome: CccOutcome,
    pub bounds: BoundSet,
    pub stats: CccStats,
    /// `(lower, upper)` after every bisection step, when tracing.
    pub brackets: Vec<(Rational, Rational)>,
}

#[derive(Clone, Debug)]
pub struct CccOptions {
    pub oracle: OracleConfig,
    /// Try a smaller bit bound first and certify the result independently.
    pub fast: bool,
    pub trace: bool,
    pub precision_retries: u32,
}

impl Default for CccOptions {
    fn default() -> Self {
        CccOptions {
            oracle: OracleConfig::default(),
            fast: false,
            trace: false,
            precision_retries: 3,
        }
    }
}

pub fn minimize_ccc(data: &Dataset, scores: &ScoreVector, options: &CccOptions) -> Result<CccSolution> {
    data.validate()?;
    if scores.len() != data.n() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} scores for {} observations",
            scores.len(),
            data.n()
        )));
    }
    if !scores.is_nondecreasing() {
        return Err(CoreError::NotMonotone);
    }
    let rigorous = compute_bounds(data, scores)?;
    if !options.fast {
        return Solver::new(data, scores, rigorous, options).solve();
    }
    let q_fast = (rigorous.q.div_ceil(2)).max(6);
    if q_fast < rigorous.q {
        let fast = bounds_for_q(data, scores, q_fast)?;
        let mut solver = Solver::new(data, scores, fast, options);
        solver.stats.fast_mode = true;
        if let Ok(sol) = solver.solve() {
            if let Some(sol) = certify_fast(data, scores, sol, &rigorous, options)? {
                return Ok(sol);
            }
        }
    }
    let mut solver = Solver::new(data, scores, rigorous, options);
    solver.stats.fast_mode = true;
    solver.stats.fell_back = true;
    solver.solve()
}

/// Keeps a fast-mode answer only if it is independently certified.
fn certify_fast(
    data: &Dataset,
    scores: &ScoreVector,
    mut sol: CccSolution,
    rigorous: &BoundSet,
    options: &CccOptions,
) -> Result<Option<CccSolution>> {
    match &sol.outcome {
        CccOutcome::Minimum { t0, beta0, .. } => {
            if eval_f(data, scores, beta0) == *t0 && verify_optimality(data, scores, beta0) {
                sol.bounds = rigorous.clone();
                Ok(Some(sol))
            } else {
                Ok(None)
            }
        }
        CccOutcome::Unbounded => {
            let mut check = Solver::new(data, scores, rigorous.clone(), options);
            if check.unbounded()? {
                sol.stats.oracle_calls += check.stats.oracle_calls;
                sol.stats.ellipsoid_cuts += check.stats.ellipsoid_cuts;
                sol.bounds = rigorous.clone();
                Ok(Some(sol))
            } else {
                Ok(None)
            }
        }
    }
}

struct Solver<'a> {
    data: &'a Dataset,
    scores: &'a ScoreVector,
    bounds: BoundSet,
    options: &'a CccOptions,
    stats: CccStats,
    brackets: Vec<(Rational, Rational)>,
}

impl<'a> Solver<'a> {
    fn new(data: &'a Dataset, scores: &'a ScoreVector, bounds: BoundSet, options: &'a CccOptions) -> Self {
        Solver {
            data,
            scores,
            bounds,
            options,
            stats: CccStats::default(),
            brackets: Vec::new(),
        }
    }

    fn ask(&mut self, t: &Rational, w: &[Vec<Rational>], z: &[Rational]) -> Result<bool> {
        let mut query = OracleQuery::star(self.data, self.scores, t.clone());
        query.w.extend_from_slice(w);
        query.z.extend_from_slice(z);
        let mut config = self.options.oracle.clone();
        let mut retries = 0;
        loop {
            self.stats.oracle_calls += 1;
            match oracle_a(&query, &self.bounds, &config) {
                Ok(ans) => {
                    self.stats.ellipsoid_cuts += ans.iterations;
                    return Ok(ans.verdict == Verdict::Yes);
                }
                Err(CoreError::PrecisionExhausted | CoreError::DegenerateDirection)
                    if retries < self.options.precision_retries =>
                {
                    retries += 1;
                    self.stats.precision_retries += 1;
                    let current = crate::ellipsoid_oracle::working_precision(
                        self.data.p(),
                        &self.bounds,
                        &config,
                    );
                    config.min_precision = 2 * current;
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn unbounded(&mut self) -> Result<bool> {
        let t = -Rational::from_integer(pow2(self.bounds.q)) - Rational::one();
        self.ask(&t, &[], &[])
    }

    fn solve(mut self) -> Result<CccSolution> {
        if self.unbounded()? {
            return Ok(self.finish(CccOutcome::Unbounded));
        }
        let q = self.bounds.q;
        let mut lo = -Rational::from_integer(pow2(q));
        let mut hi = Rational::from_integer(pow2(q));
        let width = Rational::new(BigInt::one(), pow2(2 * q + 1));
        let two = Rational::from_integer(BigInt::from(2));
        while &hi - &lo > width {
            let mid = (&lo + &hi) / &two;
            if self.ask(&mid, &[], &[])? {
                hi = mid;
            } else {
                lo = mid;
            }
            self.stats.bisection_steps += 1;
            if self.options.trace {
                self.brackets.push((lo.clone(), hi.clone()));
            }
        }
        let mid = (&lo + &hi) / &two;
        let t0 = diophantine_approx(&mid, &pow2(q))
            .ok_or_else(|| CoreError::SnapFailed(format!("no fraction near {mid} with denominator <= 2^{q}")))?;
        let (face_w, face_z, face_pairs) = self.face(&t0)?;
        let p = self.data.p();
        let beta0 = solve_equalities(&face_w, &face_z, p)?;
        let value = eval_f(self.data, self.scores, &beta0);
        if value != t0 {
            return Err(CoreError::SnapFailed(format!(
                "F at the face point is {value}, snapped optimum is {t0}"
            )));
        }
        Ok(self.finish(CccOutcome::Minimum {
            t0,
            beta0,
            face_w,
            face_z,
            face_pairs,
        }))
    }

    #[allow(clippy::type_complexity)]
    fn face(&mut self, t0: &Rational) -> Result<(Vec<Vec<Rational>>, Vec<Rational>, Vec<(usize, usize)>)> {
        let n = self.data.n();
        let p = self.data.p();
        let x = self.data.x();
        let y = self.data.y();
        let mut w: Vec<Vec<Rational>> = Vec::new();
        let mut z: Vec<Rational> = Vec::new();
        let mut pairs = Vec::new();
        let mut current_rank = 0;
        for i in 0..n {
            for j in i + 1..n {
                let normal: Vec<Rational> = x[i].iter().zip(&x[j]).map(|(a, b)| a - b).collect();
                if normal.iter().all(Zero::is_zero) {
                    continue;
                }
                let offset = &y[i] - &y[j];
                let mut trial_w = w.clone();
                trial_w.push(normal.clone());
                let mut trial_z = z.clone();
                trial_z.push(offset.clone());
                let trial_rank = rank(&trial_w);
                let keep = if trial_rank == current_rank {
                    // implied by the kept rows or contradicting them
                    self.stats.face_shortcuts += 1;
                    solve_equalities(&trial_w, &trial_z, p).is_ok()
                } else {
                    let mut two_sided_w = Vec::with_capacity(2 * trial_w.len());
                    let mut two_sided_z = Vec::with_capacity(2 * trial_w.len());
                    for (row, rhs) in trial_w.iter().zip(&trial_z) {
                        two_sided_w.push(row.clone());
                        two_sided_z.push(rhs.clone());
                        two_sided_w.push(row.iter().map(|v| -v).collect());
                        two_sided_z.push(-rhs);
                    }
                    self.ask(t0, &two_sided_w, &two_sided_z)?
                };
                if keep {
                    w = trial_w;
                    z = trial_z;
                    pairs.push((i, j));
                    current_rank = trial_rank;
                }
            }
        }
        Ok((w, z, pairs))
    }

    fn finish(self, outcome: CccOutcome) -> CccSolution {
        CccSolution {
            outcome,
            bounds: self.bounds,
            stats: self.stats,
            brackets: self.brackets,
        }
    }
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Whether zero is a subgradient of `F` at `beta0`: a feasibility program
/// over doubly stochastic weights on each block of tied residuals.
pub fn verify_optimality(data: &Dataset, scores: &ScoreVector, beta0: &[Rational]) -> bool {
    assert_eq!(scores.len(), data.n(), "score vector length must equal n");
    let p = data.p();
    let r = residuals(data, beta0);
    let order = r.ascending_order();
    let alpha = scores.values();
    let mut blocks: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    for k in 1..=order.len() {
        if k == order.len() || r.values[order[k]] != r.values[order[start]] {
            blocks.push(start..k);
            start = k;
        }
    }
    // fixed part of Σ α_k x_π(k) from untied positions
    let mut fixed = vec![Rational::zero(); p];
    let mut var_count = 0;
    for b in &blocks {
        if b.len() == 1 {
            let k = b.start;
            for (f, v) in fixed.iter_mut().zip(&data.x()[order[k]]) {
                *f += &alpha[k] * v;
            }
        } else {
            var_count += b.len() * b.len();
        }
    }
    if var_count == 0 {
        return fixed.iter().all(Zero::is_zero);
    }
    let mut lp = LinearProgram::maximize(vec![Rational::zero(); var_count]);
    for v in 0..var_count {
        lp.set_nonnegative(v);
    }
    let mut gradient_rows = vec![vec![Rational::zero(); var_count]; p];
    let mut offset = 0;
    for b in blocks.iter().filter(|b| b.len() > 1) {
        let m = b.len();
        // variable (u, v): position b.start + u takes observation order[b.start + v]
        for u in 0..m {
            let mut row = vec![Rational::zero(); var_count];
            for v in 0..m {
                row[offset + u * m + v] = Rational::one();
            }
            lp.eq(row, Rational::one());
        }
        for v in 0..m {
            let mut row = vec![Rational::zero(); var_count];
            for u in 0..m {
                row[offset + u * m + v] = Rational::one();
            }
            lp.eq(row, Rational::one());
        }
        for u in 0..m {
            let a = &alpha[b.start + u];
            for v in 0..m {
                let obs = order[b.start + v];
                for (g, xv) in gradient_rows.iter_mut().zip(&data.x()[obs]) {
                    g[offset + u * m + v] = a * xv;
                }
            }
        }
        offset += m * m;
    }
    for (row, f) in gradient_rows.into_iter().zip(&fixed) {
        lp.eq(row, -f);
    }
    !matches!(lp.solve(), LpOutcome::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numeric::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn column(xs: &[i64], ys: &[i64]) -> Dataset {
        Dataset::new(xs.iter().map(|&x| ints(&[x])).collect(), ints(ys)).unwrap()
    }

    #[test]
    fn collinear_minimum() {
        let d = column(&[1, 2, 3], &[1, 2, 3]);
        let a = ScoreVector::new(ints(&[-1, 0, 1])).unwrap();
        let opts = CccOptions {
            trace: true,
            ..CccOptions::default()
        };
        let sol = minimize_ccc(&d, &a, &opts).unwrap();
        match &sol.outcome {
            CccOutcome::Minimum {
                t0,
                beta0,
                face_pairs,
                ..
            } => {
                assert_eq!(t0, &int(0));
                assert_eq!(beta0, &ints(&[1]));
                assert_eq!(face_pairs[0], (0, 1));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(sol.stats.bisection_steps, (3 * sol.bounds.q + 2) as usize);
        for (lo, hi) in &sol.brackets {
            assert!(lo <= &int(0) && &int(0) <= hi);
        }
    }

    #[test]
    fn diverging_example() {
        let d = column(&[1, 2], &[0, 0]);
        let a = ScoreVector::new(ints(&[1, 2])).unwrap();
        let sol = minimize_ccc(&d, &a, &CccOptions::default()).unwrap();
        assert_eq!(sol.outcome, CccOutcome::Unbounded);
        assert_eq!(sol.stats.oracle_calls, 1);
    }

    #[test]
    fn intercept_only() {
        let d = column(&[1, 1, 1], &[3, 1, 2]);
        let a = ScoreVector::new(ints(&[-1, 0, 1])).unwrap();
        let sol = minimize_ccc(&d, &a, &CccOptions::default()).unwrap();
        match sol.outcome {
            CccOutcome::Minimum { t0, beta0, face_w, .. } => {
                assert_eq!(t0, int(2));
                assert_eq!(beta0, ints(&[0]));
                assert!(face_w.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fast_mode_agrees() {
        let d = column(&[1, 2, 3], &[1, 2, 3]);
        let a = ScoreVector::new(ints(&[-1, 0, 1])).unwrap();
        let opts = CccOptions {
            fast: true,
            ..CccOptions::default()
        };
        let sol = minimize_ccc(&d, &a, &opts).unwrap();
        assert_eq!(sol.outcome.t0(), Some(&int(0)));
    }

    #[test]
    fn rejects_decreasing_scores() {
        let d = column(&[1, 2, 3], &[1, 2, 3]);
        let a = ScoreVector::new(ints(&[1, 0, -1])).unwrap();
        assert_eq!(
            minimize_ccc(&d, &a, &CccOptions::default()),
            Err(CoreError::NotMonotone)
        );
    }

    #[test]
    fn optimality_certificate() {
        let d = column(&[1, 2, 3], &[1, 2, 3]);
        let a = ScoreVector::new(ints(&[-1, 0, 1])).unwrap();
        assert!(verify_optimality(&d, &a, &ints(&[1])));
        assert!(!verify_optimality(&d, &a, &ints(&[0])));
        let zero = ScoreVector::new(ints(&[0, 0, 0])).unwrap();
        assert!(verify_optimality(&d, &zero, &ints(&[5])));
    }
}
