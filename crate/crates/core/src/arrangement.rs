//! The arrangement of pairwise residual-tie hyperplanes
//! `H_ij = {β : (x_i - x_j)·β = y_i - y_j}`, its cells, and incremental
//! cell enumeration by crossing tight hyperplanes.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::exact_numeric::{binomial, Rational};
use crate::lp_exact::{LinearProgram, LpOutcome};
use crate::model::{dot, residuals, Dataset};

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub i: usize,
    pub j: usize,
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Hyperplane {
    fn canonical_key(&self) -> Vec<Rational> {
        let lead = self
            .normal
            .iter()
            .find(|v| !v.is_zero())
            .expect("nonempty hyperplane")
            .clone();
        self.normal
            .iter()
            .chain(std::iter::once(&self.offset))
            .map(|v| v / &lead)
            .collect()
    }

    /// Signed value `normal·β - offset`.
    pub fn side(&self, beta: &[Rational]) -> Rational {
        dot(&self.normal, beta) - &self.offset
    }
}

/// Pairs whose hyperplane coincides with a lexicographically smaller pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RedundancyList {
    pairs: BTreeSet<(usize, usize)>,
}

impl RedundancyList {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i.min(j), i.max(j)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.pairs.iter()
    }
}

/// Hyperplanes of all pairs `i < j` with a nonzero normal, in lexicographic
/// pair order, together with the redundant pairs among them.
pub fn build_hyperplanes(data: &Dataset) -> (Vec<Hyperplane>, RedundancyList) {
    let n = data.n();
    let mut planes = Vec::new();
    let mut seen: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
    let mut redundant = RedundancyList::default();
    for i in 0..n {
        for j in i + 1..n {
            let normal: Vec<Rational> = data
                .row(i)
                .iter()
                .zip(data.row(j))
                .map(|(a, b)| a - b)
                .collect();
            if normal.iter().all(Zero::is_zero) {
                continue;
            }
            let h = Hyperplane {
                i,
                j,
                normal,
                offset: &data.y()[i] - &data.y()[j],
            };
            if seen.insert(h.canonical_key(), planes.len()).is_some() {
                redundant.pairs.insert((i, j));
            }
            planes.push(h);
        }
    }
    (planes, redundant)
}

/// `Σ_{i=0}^{p} C(N, i)`, the maximal number of cells cut by `N` hyperplanes in dimension `p`.
pub fn zeta(n_planes: u64, p: u64) -> BigUint {
    (0..=p).map(|i| binomial(n_planes, i)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    /// Observation indices in ascending residual order.
    Interior(Vec<usize>),
    OnBoundary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub perm: Vec<usize>,
    pub witness: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TightnessResult {
    Tight { crossing: Vec<Rational> },
    NotTight,
}

impl TightnessResult {
    pub fn is_tight(&self) -> bool {
        matches!(self, TightnessResult::Tight { .. })
    }
}

pub trait CellSink {
    fn emit(&mut self, cell: &Cell);
}

impl<F: FnMut(&Cell)> CellSink for F {
    fn emit(&mut self, cell: &Cell) {
        self(cell)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub cells: usize,
    pub lps: usize,
    /// Root call has depth 0.
    pub max_depth: usize,
    pub max_tight_per_cell: usize,
}

pub struct Arrangement<'a> {
    data: &'a Dataset,
    planes: Vec<Hyperplane>,
    redundant: RedundancyList,
    /// Pair slot (triangular index) to index into `planes`.
    slot: Vec<Option<usize>>,
    /// Plane index to distinct hyperplane id.
    class: Vec<usize>,
    /// Distinct id to the plane index of its lexicographically smallest pair.
    reps: Vec<usize>,
}

impl<'a> Arrangement<'a> {
    pub fn new(data: &'a Dataset) -> Self {
        let (planes, redundant) = build_hyperplanes(data);
        let n = data.n();
        let mut slot = vec![None; n * (n - 1) / 2];
        let mut ids: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
        let mut class = Vec::with_capacity(planes.len());
        let mut reps = Vec::new();
        for (k, h) in planes.iter().enumerate() {
            slot[pair_slot(n, h.i, h.j)] = Some(k);
            let next = reps.len();
            let id = *ids.entry(h.canonical_key()).or_insert(next);
            if id == next {
                reps.push(k);
            }
            class.push(id);
        }
        Arrangement {
            data,
            planes,
            redundant,
            slot,
            class,
            reps,
        }
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    /// Every pair with a nonempty hyperplane, including redundant ones.
    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.planes
    }

    pub fn redundant(&self) -> &RedundancyList {
        &self.redundant
    }

    pub fn distinct_count(&self) -> usize {
        self.reps.len()
    }

    pub fn distinct_hyperplanes(&self) -> impl Iterator<Item = &Hyperplane> {
        self.reps.iter().map(|&k| &self.planes[k])
    }

    pub fn representative(&self, id: usize) -> &Hyperplane {
        &self.planes[self.reps[id]]
    }

    /// Distinct hyperplane id of the pair, `None` for an empty hyperplane.
    pub fn hyperplane_id(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (i.min(j), i.max(j));
        self.slot[pair_slot(self.data.n(), a, b)].map(|k| self.class[k])
    }

    pub fn cell_of(&self, beta: &[Rational]) -> Location {
        let r = residuals(self.data, beta);
        let order = r.ascending_order();
        // pairs on empty hyperplanes never tie, so any tie is a boundary
        if order.windows(2).any(|w| r.values[w[0]] == r.values[w[1]]) {
            Location::OnBoundary
        } else {
            Location::Interior(order)
        }
    }

    /// Deterministic interior point: the origin, or the first point
    /// `2^-k (1, δ, δ², …)` off every hyperplane, with δ derived from `seed`.
    pub fn find_interior_point(&self, seed: u64) -> Vec<Rational> {
        let p = self.data.p();
        let origin = vec![Rational::zero(); p];
        if matches!(self.cell_of(&origin), Location::Interior(_)) {
            return origin;
        }
        let mut attempt = 0u64;
        let dir = loop {
            let delta = Rational::new(BigInt::one(), BigInt::from(3 + seed + attempt));
            let mut v = Vec::with_capacity(p);
            let mut pw = Rational::one();
            for _ in 0..p {
                v.push(pw.clone());
                pw *= &delta;
            }
            // the ray must not lie inside a hyperplane through the origin
            let bad = self
                .distinct_hyperplanes()
                .any(|h| h.offset.is_zero() && dot(&h.normal, &v).is_zero());
            if !bad {
                break v;
            }
            attempt += 1;
        };
        let mut scale = Rational::one();
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        loop {
            let beta: Vec<Rational> = dir.iter().map(|d| d * &scale).collect();
            if matches!(self.cell_of(&beta), Location::Interior(_)) {
                return beta;
            }
            scale *= &half;
        }
    }

    /// Adjacent pairs of `perm` mapped to their representative pair, with
    /// empty hyperplanes dropped and duplicates removed.
    pub fn candidate_tight_pairs(&self, perm: &[usize]) -> Vec<(usize, usize)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for w in perm.windows(2) {
            if let Some(id) = self.hyperplane_id(w[0], w[1]) {
                if seen.insert(id) {
                    let h = self.representative(id);
                    out.push((h.i, h.j));
                }
            }
        }
        out
    }

    /// Decides whether the hyperplane of `pair` carries a facet of the cell
    /// and, if so, returns an interior point of the cell across that facet.
    pub fn tightness_test(&self, cell: &Cell, pair: (usize, usize)) -> Result<TightnessResult> {
        let id = self
            .hyperplane_id(pair.0, pair.1)
            .ok_or_else(|| CoreError::Internal(format!("pair {pair:?} has an empty hyperplane")))?;
        let p = self.data.p();
        let x = self.data.x();
        let y = self.data.y();
        // variables: β (p entries), ε
        let mut obj = vec![Rational::zero(); p + 1];
        obj[p] = Rational::one();
        let mut lp = LinearProgram::maximize(obj);
        for w in cell.perm.windows(2) {
            let (a, b) = (w[0], w[1]);
            match self.hyperplane_id(a, b) {
                None => continue,
                Some(other) if other == id => continue,
                Some(_) => {}
            }
            // r_a + ε <= r_b  <=>  (x_b - x_a)·β + ε <= y_b - y_a
            let mut row: Vec<Rational> = x[b].iter().zip(&x[a]).map(|(u, v)| u - v).collect();
            row.push(Rational::one());
            lp.le(row, &y[b] - &y[a]);
        }
        let h = self.representative(id);
        let mut row = h.normal.clone();
        row.push(Rational::zero());
        lp.eq(row, h.offset.clone());
        let mut cap = vec![Rational::zero(); p + 1];
        cap[p] = Rational::one();
        lp.le(cap, Rational::one());
        let beta_star = match lp.solve() {
            LpOutcome::Optimal { value, mut point } if value.is_positive() => {
                point.truncate(p);
                point
            }
            LpOutcome::Optimal { .. } | LpOutcome::Infeasible => return Ok(TightnessResult::NotTight),
            LpOutcome::Unbounded { .. } => {
                return Err(CoreError::Internal("capped tightness program unbounded".into()))
            }
        };
        Ok(TightnessResult::Tight {
            crossing: self.shoot(&cell.witness, &beta_star, id),
        })
    }

    /// Midpoint between `target` and the next hyperplane hit on the ray
    /// from `from` through `target`, or a full step past `target` when the
    /// ray hits nothing else.
    fn shoot(&self, from: &[Rational], target: &[Rational], skip: usize) -> Vec<Rational> {
        let d: Vec<Rational> = target.iter().zip(from).map(|(t, f)| t - f).collect();
        let one = Rational::one();
        let mut first: Option<Rational> = None;
        for (id, h) in self.distinct_hyperplanes().enumerate() {
            if id == skip {
                continue;
            }
            let slope = dot(&h.normal, &d);
            if slope.is_zero() {
                continue;
            }
            let lambda = (&h.offset - dot(&h.normal, from)) / slope;
            if lambda > one && first.as_ref().is_none_or(|f| &lambda < f) {
                first = Some(lambda);
            }
        }
        let step = match first {
            Some(l) => (l + &one) / Rational::from_integer(BigInt::from(2)),
            None => Rational::from_integer(BigInt::from(2)),
        };
        from.iter().zip(&d).map(|(f, dd)| f + dd * &step).collect()
    }

    /// Visits every cell exactly once, streaming `(perm, witness)` to `sink`.
    pub fn enumerate_cells(&self, seed: u64, sink: &mut dyn CellSink) -> Result<EnumerationStats> {
        let start = self.find_interior_point(seed);
        let Location::Interior(perm) = self.cell_of(&start) else {
            return Err(CoreError::Internal("start point on a hyperplane".into()));
        };
        let mut walk = Walk {
            arr: self,
            sink,
            stats: EnumerationStats::default(),
            listed: vec![false; self.distinct_count()],
            stack: Vec::new(),
        };
        walk.visit(
            Cell {
                perm,
                witness: start,
            },
            0,
        )?;
        Ok(walk.stats)
    }
}

struct Walk<'s, 'a> {
    arr: &'s Arrangement<'a>,
    sink: &'s mut dyn CellSink,
    stats: EnumerationStats,
    listed: Vec<bool>,
    stack: Vec<usize>,
}

impl Walk<'_, '_> {
    fn visit(&mut self, cell: Cell, depth: usize) -> Result<()> {
        self.stats.cells += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        self.sink.emit(&cell);
        let entry = self.stack.len();
        let mut tight = 0;
        for (i, j) in self.arr.candidate_tight_pairs(&cell.perm) {
            let id = self.arr.hyperplane_id(i, j).expect("candidate is nonempty");
            if self.listed[id] {
                continue;
            }
            self.stats.lps += 1;
            if let TightnessResult::Tight { crossing } = self.arr.tightness_test(&cell, (i, j))? {
                tight += 1;
                let Location::Interior(perm) = self.arr.cell_of(&crossing) else {
                    return Err(CoreError::Internal("crossing point on a hyperplane".into()));
                };
                self.listed[id] = true;
                self.stack.push(id);
                self.visit(
                    Cell {
                        perm,
                        witness: crossing,
                    },
                    depth + 1,
                )?;
            }
        }
        self.stats.max_tight_per_cell = self.stats.max_tight_per_cell.max(tight);
        for id in self.stack.drain(entry..) {
            self.listed[id] = false;
        }
        Ok(())
    }
}

fn pair_slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}
