//! Data, score vectors, residuals and the rank criterion
//! `F(β) = Σ_k α_k r_(k)(β)` with `r(β) = y - Xβ` sorted ascending.

mod scores;

use std::collections::HashMap;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::exact_numeric::Rational;

pub use scores::{normal_quantile, score_coefficients, DEFAULT_SCORE_PRECISION};

/// `n` observations with `p` regressors each, stored row-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    x: Vec<Vec<Rational>>,
    y: Vec<Rational>,
}

impl Dataset {
    pub fn new(x: Vec<Vec<Rational>>, y: Vec<Rational>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "X has {} rows but y has {} entries",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(CoreError::DimensionMismatch("need at least two observations".into()));
        }
        let p = x[0].len();
        if p == 0 {
            return Err(CoreError::DimensionMismatch("need at least one regressor".into()));
        }
        if let Some(i) = x.iter().position(|r| r.len() != p) {
            return Err(CoreError::DimensionMismatch(format!(
                "row {} has {} columns, expected {p}",
                i + 1,
                x[i].len()
            )));
        }
        Ok(Dataset { x, y })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x[0].len()
    }

    pub fn x(&self) -> &[Vec<Rational>] {
        &self.x
    }

    pub fn y(&self) -> &[Rational] {
        &self.y
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.x[i]
    }

    /// Fails on the first pair of identical rows `(x_i, y_i) = (x_j, y_j)`.
    pub fn validate(&self) -> Result<()> {
        let mut seen: HashMap<(&[Rational], &Rational), usize> = HashMap::new();
        for j in 0..self.n() {
            if let Some(&i) = seen.get(&(self.x[j].as_slice(), &self.y[j])) {
                return Err(CoreError::DuplicateRow { first: i, second: j });
            }
            seen.insert((self.x[j].as_slice(), &self.y[j]), j);
        }
        Ok(())
    }
}

pub fn validate(data: &Dataset) -> Result<()> {
    data.validate()
}

/// Score vector `α` with cached shape flags.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreVector {
    values: Vec<Rational>,
    nondecreasing: bool,
    zero_sum: bool,
}

impl ScoreVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(CoreError::EmptyScores);
        }
        let nondecreasing = values.windows(2).all(|w| w[0] <= w[1]);
        let zero_sum = values.iter().sum::<Rational>().is_zero();
        Ok(ScoreVector {
            values,
            nondecreasing,
            zero_sum,
        })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.nondecreasing
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    /// Per-observation coefficients of the linear piece on the cell `perm`.
    pub fn coefficients_for(&self, perm: &[usize]) -> Vec<Rational> {
        let mut a = vec![Rational::zero(); perm.len()];
        for (k, &obs) in perm.iter().enumerate() {
            a[obs] = self.values[k].clone();
        }
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScoreKind {
    Sign,
    Wilcoxon,
    VanDerWaerden,
}

impl FromStr for ScoreKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sign" => Ok(ScoreKind::Sign),
            "wilcoxon" => Ok(ScoreKind::Wilcoxon),
            "vdw" | "vanderwaerden" | "van-der-waerden" => Ok(ScoreKind::VanDerWaerden),
            other => Err(format!("unknown score '{other}'")),
        }
    }
}

/// Maps a cell (observation indices in ascending residual order) to
/// per-observation coefficients `a` with `F = Σ a_i r_i` on that cell.
pub trait CoefficientOracle {
    fn coefficients(&self, perm: &[usize]) -> Result<Vec<Rational>>;
}

impl CoefficientOracle for ScoreVector {
    fn coefficients(&self, perm: &[usize]) -> Result<Vec<Rational>> {
        if perm.len() != self.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "{} scores for {} observations",
                self.len(),
                perm.len()
            )));
        }
        Ok(self.coefficients_for(perm))
    }
}

/// Adapts a closure into a coefficient oracle.
pub struct FnOracle<F>(pub F);

impl<F: Fn(&[usize]) -> Vec<Rational>> CoefficientOracle for FnOracle<F> {
    fn coefficients(&self, perm: &[usize]) -> Result<Vec<Rational>> {
        Ok((self.0)(perm))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residuals {
    pub beta: Vec<Rational>,
    pub values: Vec<Rational>,
}

impl Residuals {
    /// Observation indices sorted by residual, ties broken by index.
    pub fn ascending_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].cmp(&self.values[b]).then(a.cmp(&b)));
        idx
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

pub fn residuals(data: &Dataset, beta: &[Rational]) -> Residuals {
    assert_eq!(beta.len(), data.p(), "beta has wrong dimension");
    let values = data
        .x
        .iter()
        .zip(&data.y)
        .map(|(row, y)| y - dot(row, beta))
        .collect();
    Residuals {
        beta: beta.to_vec(),
        values,
    }
}

fn check_scores(data: &Dataset, scores: &ScoreVector) {
    assert_eq!(scores.len(), data.n(), "score vector length must equal n");
}

pub fn eval_f(data: &Dataset, scores: &ScoreVector, beta: &[Rational]) -> Rational {
    check_scores(data, scores);
    let r = residuals(data, beta);
    let mut sorted = r.values;
    sorted.sort();
    dot(scores.values(), &sorted)
}

/// `max_π Σ_k α_k r_π(k)`, by enumerating all permutations.
pub fn eval_f_maxform(
    data: &Dataset,
    scores: &ScoreVector,
    beta: &[Rational],
    cap: usize,
) -> Result<Rational> {
    check_scores(data, scores);
    let n = data.n();
    if n > cap {
        return Err(CoreError::PermutationLimitExceeded { n, cap });
    }
    let r = residuals(data, beta);
    let best = (0..n)
        .permutations(n)
        .map(|perm| {
            perm.iter()
                .zip(scores.values())
                .map(|(&i, a)| a * &r.values[i])
                .sum::<Rational>()
        })
        .max()
        .expect("n >= 2");
    Ok(best)
}

/// `-Σ_k α_k x_π(k)` for the ascending order π at `beta`.
pub fn subgradient(data: &Dataset, scores: &ScoreVector, beta: &[Rational]) -> Vec<Rational> {
    check_scores(data, scores);
    let order = residuals(data, beta).ascending_order();
    let mut g = vec![Rational::zero(); data.p()];
    for (k, &i) in order.iter().enumerate() {
        let a = &scores.values()[k];
        if a.is_zero() {
            continue;
        }
        for (gj, xij) in g.iter_mut().zip(&data.x[i]) {
            *gj -= a * xij;
        }
    }
    g
}
