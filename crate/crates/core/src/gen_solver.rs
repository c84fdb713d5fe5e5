//! Minimization of functions that are linear on every cell: enumerate the
//! cells and solve one linear program over each closed cell.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::arrangement::{Arrangement, Cell};
use crate::error::{CoreError, Result};
use crate::exact_numeric::{bitsize, Rational};
use crate::lp_exact::{LinearProgram, LpOutcome};
use crate::model::{dot, CoefficientOracle, Dataset};

#[derive(Clone, Debug, PartialEq)]
pub enum GenOutcome {
    Minimum {
        value: Rational,
        minimizer: Vec<Rational>,
        cell: Vec<usize>,
    },
    Unbounded {
        cell: Vec<usize>,
    },
}

impl GenOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            GenOutcome::Minimum { value, .. } => Some(value),
            GenOutcome::Unbounded { .. } => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, GenOutcome::Unbounded { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenStats {
    pub cells: usize,
    /// Inner programs, one per cell.
    pub cell_lps: usize,
    /// Tightness programs spent on enumeration.
    pub enumeration_lps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSolution {
    pub outcome: GenOutcome,
    pub stats: GenStats,
}

#[derive(Clone, Debug)]
pub struct GenOptions {
    pub seed: u64,
    /// Warn when an oracle coefficient exceeds this bit size.
    pub coefficient_bits_cap: Option<u64>,
    pub permutation_cap: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            seed: 0,
            coefficient_bits_cap: None,
            permutation_cap: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellMinimum {
    Minimum { value: Rational, point: Vec<Rational> },
    Unbounded,
    Infeasible,
}

/// Minimizes `Σ a_i (y_i - x_i·β)` over the closure of the cell `perm`.
pub fn closed_cell_minimum(data: &Dataset, perm: &[usize], coeffs: &[Rational]) -> CellMinimum {
    let p = data.p();
    let x = data.x();
    let y = data.y();
    let mut weight = vec![Rational::zero(); p];
    for (a, row) in coeffs.iter().zip(x) {
        if a.is_zero() {
            continue;
        }
        for (w, v) in weight.iter_mut().zip(row) {
            *w += a * v;
        }
    }
    let base = dot(coeffs, y);
    let mut lp = LinearProgram::maximize(weight);
    for w in perm.windows(2) {
        let (a, b) = (w[0], w[1]);
        let row: Vec<Rational> = x[b].iter().zip(&x[a]).map(|(u, v)| u - v).collect();
        let rhs = &y[b] - &y[a];
        if row.iter().all(Zero::is_zero) {
            if rhs.is_negative() {
                return CellMinimum::Infeasible;
            }
            continue;
        }
        lp.le(row, rhs);
    }
    match lp.solve() {
        LpOutcome::Optimal { value, point } => CellMinimum::Minimum {
            value: base - value,
            point,
        },
        LpOutcome::Unbounded { .. } => CellMinimum::Unbounded,
        LpOutcome::Infeasible => CellMinimum::Infeasible,
    }
}

/// Shared bookkeeping for both solvers.
pub(crate) struct Tracker<'o, O: ?Sized> {
    oracle: &'o O,
    cap: Option<u64>,
    memo: HashMap<Vec<usize>, Vec<Rational>>,
    pub best: Option<GenOutcome>,
    pub stats: GenStats,
}

impl<'o, O: CoefficientOracle + ?Sized> Tracker<'o, O> {
    pub(crate) fn new(oracle: &'o O, cap: Option<u64>) -> Self {
        Tracker {
            oracle,
            cap,
            memo: HashMap::new(),
            best: None,
            stats: GenStats::default(),
        }
    }

    fn fetch(&mut self, perm: &[usize]) -> Result<Vec<Rational>> {
        let a = self.oracle.coefficients(perm)?;
        if a.len() != perm.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "oracle returned {} coefficients for n = {}",
                a.len(),
                perm.len()
            )));
        }
        if self.oracle.coefficients(perm)? != a {
            return Err(CoreError::OracleImpure);
        }
        if let Some(prev) = self.memo.get(perm) {
            if *prev != a {
                return Err(CoreError::OracleImpure);
            }
        }
        if let Some(cap) = self.cap {
            if let Some(big) = a.iter().map(bitsize).max().filter(|&b| b > cap) {
                log::warn!("coefficient of {big} bits exceeds the cap of {cap} bits");
            }
        }
        self.memo.insert(perm.to_vec(), a.clone());
        Ok(a)
    }

    pub(crate) fn visit(&mut self, data: &Dataset, perm: &[usize]) -> Result<()> {
        self.stats.cells += 1;
        if matches!(self.best, Some(GenOutcome::Unbounded { .. })) {
            return Ok(());
        }
        let a = self.fetch(perm)?;
        self.stats.cell_lps += 1;
        match closed_cell_minimum(data, perm, &a) {
            CellMinimum::Minimum { value, point } => {
                let better = match &self.best {
                    Some(GenOutcome::Minimum { value: v, .. }) => value < *v,
                    _ => true,
                };
                if better {
                    self.best = Some(GenOutcome::Minimum {
                        value,
                        minimizer: point,
                        cell: perm.to_vec(),
                    });
                }
            }
            CellMinimum::Unbounded => {
                self.best = Some(GenOutcome::Unbounded {
                    cell: perm.to_vec(),
                })
            }
            CellMinimum::Infeasible => {
                return Err(CoreError::Internal(format!(
                    "closed cell {perm:?} is empty"
                )))
            }
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> Result<GenSolution> {
        let outcome = self
            .best
            .ok_or_else(|| CoreError::Internal("no cell visited".into()))?;
        Ok(GenSolution {
            outcome,
            stats: self.stats,
        })
    }
}

pub fn minimize_gen<O: CoefficientOracle + ?Sized>(
    data: &Dataset,
    oracle: &O,
    options: &GenOptions,
) -> Result<GenSolution> {
    data.validate()?;
    let arr = Arrangement::new(data);
    let mut tracker = Tracker::new(oracle, options.coefficient_bits_cap);
    let mut failure: Option<CoreError> = None;
    let mut sink = |cell: &Cell| {
        if failure.is_none() {
            if let Err(e) = tracker.visit(data, &cell.perm) {
                failure = Some(e);
            }
        }
    };
    let enumeration = arr.enumerate_cells(options.seed, &mut sink)?;
    if let Some(e) = failure {
        return Err(e);
    }
    tracker.stats.enumeration_lps = enumeration.lps;
    tracker.finish()
}

pub fn minimize_gen_bruteforce<O: CoefficientOracle + ?Sized>(
    data: &Dataset,
    oracle: &O,
    options: &GenOptions,
) -> Result<GenSolution> {
    crate::reference::brute_min(data, oracle, options.permutation_cap)
}

/// Exact membership of `beta` in the closed cell `perm`.
pub fn in_closed_cell(data: &Dataset, perm: &[usize], beta: &[Rational]) -> bool {
    let r = crate::model::residuals(data, beta);
    perm.windows(2).all(|w| r.values[w[0]] <= r.values[w[1]])
}

/// `Σ a_i (y_i - x_i·β)`.
pub fn linear_piece(data: &Dataset, coeffs: &[Rational], beta: &[Rational]) -> Rational {
    let r = crate::model::residuals(data, beta);
    dot(coeffs, &r.values)
}
