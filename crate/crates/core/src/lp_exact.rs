//! Exact linear programming over the rationals.
//!
//! Two-phase primal simplex with Bland's rule on a dense tableau. Variables
//! are free unless marked nonnegative; free variables are split into a
//! difference of two nonnegative columns.

use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::exact_numeric::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective·x` subject to the constraints.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    nonneg: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    /// `point + λ·ray` is feasible for all λ ≥ 0 and the objective grows along `ray`.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
    Infeasible,
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            nonneg: vec![false; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.add(coeffs, Relation::Le, rhs)
    }

    pub fn eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.add(coeffs, Relation::Eq, rhs)
    }

    pub fn set_nonnegative(&mut self, var: usize) -> &mut Self {
        self.nonneg[var] = true;
        self
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    /// (plus column, optional minus column) for every original variable.
    var_cols: Vec<(usize, Option<usize>)>,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        let mut next = 0;
        for &nn in &lp.nonneg {
            if nn {
                var_cols.push((next, None));
                next += 1;
            } else {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let structural = next;
        let slacks = lp
            .constraints
            .iter()
            .filter(|c| c.relation == Relation::Le)
            .count();
        let needs_artificial: Vec<bool> = lp
            .constraints
            .iter()
            .map(|c| c.relation == Relation::Eq || c.rhs.is_negative())
            .collect();
        let artificials = needs_artificial.iter().filter(|&&b| b).count();
        let first_artificial = structural + slacks;
        let width = first_artificial + artificials + 1;
        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut basis = Vec::with_capacity(lp.constraints.len());
        let (mut slack, mut art) = (structural, first_artificial);
        for (c, &needs) in lp.constraints.iter().zip(&needs_artificial) {
            let mut row = vec![Rational::zero(); width];
            for (v, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (plus, minus) = var_cols[v];
                row[plus] = a.clone();
                if let Some(m) = minus {
                    row[m] = -a;
                }
            }
            if c.relation == Relation::Le {
                row[slack] = Rational::one();
                if !needs {
                    basis.push(slack);
                }
                slack += 1;
            }
            row[width - 1] = c.rhs.clone();
            if c.rhs.is_negative() {
                for e in row.iter_mut() {
                    *e = -&*e;
                }
            }
            if needs {
                row[art] = Rational::one();
                basis.push(art);
                art += 1;
            }
            rows.push(row);
        }
        Tableau {
            rows,
            obj: vec![Rational::zero(); width],
            basis,
            var_cols,
            first_artificial,
        }
    }

    fn width(&self) -> usize {
        self.obj.len()
    }

    fn rhs(&self) -> usize {
        self.width() - 1
    }

    /// Loads `cost` (maximized) and prices out the basic columns.
    fn set_objective(&mut self, cost: &[Rational]) {
        let w = self.width();
        self.obj = vec![Rational::zero(); w];
        self.obj[..cost.len()].clone_from_slice(cost);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = self.obj[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (o, t) in self.obj.iter_mut().zip(&self.rows[r]) {
                if !t.is_zero() {
                    *o -= &cb * t;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.rows[r][e].clone();
        if !piv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let prow = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            eliminate(row, &prow, e);
        }
        eliminate(&mut self.obj, &prow, e);
        self.rows[r] = prow;
        self.basis[r] = e;
    }

    /// Runs Bland's rule over columns `< limit`. Returns the entering column
    /// of an unbounded direction, if any.
    fn simplex(&mut self, limit: usize) -> Option<usize> {
        let rhs = self.rhs();
        loop {
            let Some(e) = (0..limit).find(|&j| self.obj[j].is_positive()) else {
                return None;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[e];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return Some(e),
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }

    fn column_values(&self) -> Vec<Rational> {
        let rhs = self.rhs();
        let mut vals = vec![Rational::zero(); self.width() - 1];
        for (r, &b) in self.basis.iter().enumerate() {
            vals[b] = self.rows[r][rhs].clone();
        }
        vals
    }

    fn to_original(&self, cols: &[Rational]) -> Vec<Rational> {
        self.var_cols
            .iter()
            .map(|&(p, m)| match m {
                Some(m) => &cols[p] - &cols[m],
                None => cols[p].clone(),
            })
            .collect()
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let art_count = self.width() - 1 - self.first_artificial;
        if art_count > 0 {
            let mut cost = vec![Rational::zero(); self.width() - 1];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            self.set_objective(&cost);
            let w = self.width() - 1;
            self.simplex(w);
            if !self.obj[self.rhs()].is_zero() {
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials();
            self.drop_artificial_columns();
        }
        let mut cost = vec![Rational::zero(); self.width() - 1];
        for (v, &(p, m)) in self.var_cols.iter().enumerate() {
            cost[p] = lp.objective[v].clone();
            if let Some(m) = m {
                cost[m] = -&lp.objective[v];
            }
        }
        self.set_objective(&cost);
        let limit = self.width() - 1;
        let entering = self.simplex(limit);
        let cols = self.column_values();
        let point = self.to_original(&cols);
        match entering {
            Some(e) => {
                let mut dir = vec![Rational::zero(); self.width() - 1];
                dir[e] = Rational::one();
                for (r, &b) in self.basis.iter().enumerate() {
                    dir[b] = -&self.rows[r][e];
                }
                let ray = self.to_original(&dir);
                LpOutcome::Unbounded { point, ray }
            }
            None => {
                let value = lp
                    .objective
                    .iter()
                    .zip(&point)
                    .map(|(c, x)| c * x)
                    .sum();
                LpOutcome::Optimal { value, point }
            }
        }
    }

    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    // redundant equality
                    self.rows.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }

    fn drop_artificial_columns(&mut self) {
        let keep = self.first_artificial;
        for row in self.rows.iter_mut() {
            let rhs = row.pop().expect("rhs column");
            row.truncate(keep);
            row.push(rhs);
        }
        self.obj = vec![Rational::zero(); keep + 1];
    }
}

fn eliminate(row: &mut [Rational], prow: &[Rational], e: usize) {
    let f = row[e].clone();
    if f.is_zero() {
        return;
    }
    for (v, pv) in row.iter_mut().zip(prow) {
        if !pv.is_zero() {
            *v -= &f * pv;
        }
    }
}

/// Solves `w·b = z` by Gaussian elimination, setting free variables to zero.
pub fn solve_equalities(w: &[Vec<Rational>], z: &[Rational], p: usize) -> Result<Vec<Rational>> {
    assert_eq!(w.len(), z.len(), "system height");
    let mut m: Vec<Vec<Rational>> = w
        .iter()
        .zip(z)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), p, "system width");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..p {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let piv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v /= &piv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r {
                eliminate(row, &prow, c);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[p].is_zero()) {
        return Err(CoreError::InconsistentSystem);
    }
    let mut b = vec![Rational::zero(); p];
    for (i, &c) in pivots.iter().enumerate() {
        b[c] = m[i][p].clone();
    }
    Ok(b)
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(p) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut r = 0;
    for c in 0..p {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let prow = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            let f = &row[c] / &prow[c];
            if f.is_zero() {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        r += 1;
    }
    r
}
