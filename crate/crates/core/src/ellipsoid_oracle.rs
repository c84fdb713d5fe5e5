//! YES/NO oracle for `{β : F(β) ≤ t, Wβ ≤ z}` by the central-cut ellipsoid
//! method on the relaxation `{F(β) ≤ t + δ, Wβ ≤ z + δ}`, `δ = 2^-q1`.
//!
//! The ellipsoid lives in binary floating point; membership and separation
//! are evaluated exactly at the (dyadic) center, so YES answers carry an
//! exactly certified witness.

use dashu_float::ops::SquareRoot;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::exact_numeric::{lcm_of_denominators, BoundSet, Rational};
use crate::float::{self, Float};
use crate::model::{dot, eval_f, subgradient, Dataset, ScoreVector};

pub const DEFAULT_PRECISION: usize = 256;

#[derive(Clone, Debug)]
pub struct OracleQuery<'a> {
    pub data: &'a Dataset,
    pub scores: &'a ScoreVector,
    pub t: Rational,
    pub w: Vec<Vec<Rational>>,
    pub z: Vec<Rational>,
}

impl<'a> OracleQuery<'a> {
    /// The query with the single trivial row `0·β ≤ 0`.
    pub fn star(data: &'a Dataset, scores: &'a ScoreVector, t: Rational) -> Self {
        OracleQuery {
            data,
            scores,
            t,
            w: vec![vec![Rational::zero(); data.p()]],
            z: vec![Rational::zero()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleAnswer {
    pub verdict: Verdict,
    pub witness: Option<Vec<Rational>>,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Minimum mantissa length; raised automatically to what the bounds need.
    pub min_precision: usize,
    /// Answer NO as soon as the current ellipsoid provably misses the relaxation.
    pub early_exit: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            min_precision: DEFAULT_PRECISION,
            early_exit: true,
        }
    }
}

/// `{b : (b - c)ᵀ E⁻¹ (b - c) ≤ 1}`.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    center: Vec<Float>,
    shape: Vec<Vec<Float>>,
    prec: usize,
}

impl Ellipsoid {
    /// Ball of the given squared radius around the origin.
    pub fn ball(p: usize, radius_sq: &Rational, prec: usize) -> Self {
        let r2 = float::from_rational(radius_sq, prec);
        let zero = float::from_i64(0, prec);
        let shape = (0..p)
            .map(|i| (0..p).map(|j| if i == j { r2.clone() } else { zero.clone() }).collect())
            .collect();
        Ellipsoid {
            center: vec![zero; p],
            shape,
            prec,
        }
    }

    pub fn from_rational(center: &[Rational], shape: &[Vec<Rational>], prec: usize) -> Self {
        Ellipsoid {
            center: center.iter().map(|v| float::from_rational(v, prec)).collect(),
            shape: shape
                .iter()
                .map(|row| row.iter().map(|v| float::from_rational(v, prec)).collect())
                .collect(),
            prec,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Exact value of the (dyadic) center.
    pub fn center(&self) -> Vec<Rational> {
        self.center.iter().map(float::to_rational).collect()
    }

    pub fn shape(&self) -> Vec<Vec<Rational>> {
        self.shape
            .iter()
            .map(|row| row.iter().map(float::to_rational).collect())
            .collect()
    }

    fn apply(&self, s: &[Float]) -> Vec<Float> {
        self.shape
            .iter()
            .map(|row| {
                let mut acc = float::from_i64(0, self.prec);
                for (a, b) in row.iter().zip(s) {
                    acc += a * b;
                }
                acc
            })
            .collect()
    }

    fn quad(&self, s: &[Float]) -> Float {
        let es = self.apply(s);
        let mut acc = float::from_i64(0, self.prec);
        for (a, b) in s.iter().zip(&es) {
            acc += a * b;
        }
        acc
    }

    /// Löwner-John ellipsoid of the half `{b : sᵀ(b - c) ≤ 0}`.
    pub fn central_cut(&self, s: &[Rational]) -> Result<Ellipsoid> {
        let sf: Vec<Float> = s.iter().map(|v| float::from_rational(v, self.prec)).collect();
        self.cut(&sf)
    }

    fn cut(&self, s: &[Float]) -> Result<Ellipsoid> {
        let p = self.dim();
        let prec = self.prec;
        let es = self.apply(s);
        let mut ses = float::from_i64(0, prec);
        for (a, b) in s.iter().zip(&es) {
            ses += a * b;
        }
        if ses <= float::from_i64(0, prec) {
            return Err(CoreError::DegenerateDirection);
        }
        let root = ses.sqrt();
        let b: Vec<Float> = es.iter().map(|v| v / &root).collect();
        let k = float::from_i64(p as i64 + 1, prec);
        let center: Vec<Float> = self
            .center
            .iter()
            .zip(&b)
            .map(|(c, bi)| c - bi / &k)
            .collect();
        if p == 1 {
            let quarter = float::from_rational(&Rational::new(1.into(), 4.into()), prec);
            return Ok(Ellipsoid {
                center,
                shape: vec![vec![&self.shape[0][0] * &quarter]],
                prec,
            });
        }
        let pp = float::from_i64((p * p) as i64, prec);
        let factor = &pp / (&pp - float::from_i64(1, prec));
        let two_over = float::from_i64(2, prec) / &k;
        let mut shape = self.shape.clone();
        for i in 0..p {
            for j in i..p {
                let v = (&self.shape[i][j] - &two_over * &b[i] * &b[j]) * &factor;
                shape[i][j] = v.clone();
                shape[j][i] = v;
            }
        }
        Ok(Ellipsoid { center, shape, prec })
    }

    fn inflate(&mut self, factor: &Float) {
        for row in self.shape.iter_mut() {
            for v in row.iter_mut() {
                *v = &*v * factor;
            }
        }
    }

    /// Cholesky pivots of the shape; `None` if not positive definite at working precision.
    fn pivots(&self) -> Option<Vec<Float>> {
        let p = self.dim();
        let mut l = vec![vec![float::from_i64(0, self.prec); p]; p];
        let mut piv = Vec::with_capacity(p);
        for j in 0..p {
            let mut d = self.shape[j][j].clone();
            for k in 0..j {
                d -= &l[j][k] * &l[j][k];
            }
            if d <= float::from_i64(0, self.prec) {
                return None;
            }
            let dj = d.clone().sqrt();
            for i in j + 1..p {
                let mut v = self.shape[i][j].clone();
                for k in 0..j {
                    v -= &l[i][k] * &l[j][k];
                }
                l[i][j] = v / &dj;
            }
            l[j][j] = dj;
            piv.push(d);
        }
        Some(piv)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.pivots().is_some()
    }

    /// log2 of det(E), evaluated through the Cholesky pivots.
    pub fn log2_det(&self) -> Option<f64> {
        self.pivots().map(|piv| piv.iter().map(log2_abs).sum())
    }

    /// `(b - c)ᵀ E⁻¹ (b - c)` at working precision.
    pub fn norm_sq(&self, b: &[Rational]) -> Option<f64> {
        let p = self.dim();
        let d: Vec<Float> = b
            .iter()
            .zip(&self.center)
            .map(|(v, c)| float::from_rational(v, self.prec) - c)
            .collect();
        // Gaussian elimination on [E | d]
        let mut m: Vec<Vec<Float>> = self
            .shape
            .iter()
            .zip(&d)
            .map(|(row, di)| {
                let mut r = row.clone();
                r.push(di.clone());
                r
            })
            .collect();
        for c in 0..p {
            if m[c][c] <= float::from_i64(0, self.prec) {
                return None;
            }
            for r in c + 1..p {
                let f = &m[r][c] / &m[c][c];
                for k in c..=p {
                    let v = &m[c][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
        let mut x = vec![float::from_i64(0, self.prec); p];
        for c in (0..p).rev() {
            let mut v = m[c][p].clone();
            for k in c + 1..p {
                v -= &m[c][k] * &x[k];
            }
            x[c] = v / &m[c][c];
        }
        let mut acc = float::from_i64(0, self.prec);
        for (a, b) in d.iter().zip(&x) {
            acc += a * b;
        }
        Some(float::to_f64(&acc))
    }
}

fn log2_abs(x: &Float) -> f64 {
    let (m, e) = float::parts(x);
    let bits = m.bits();
    let shift = bits.saturating_sub(60);
    let top = (m.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.log2() + shift as f64 + e as f64
}

/// Exact test of the relaxed conditions at a rational point.
pub fn membership(query: &OracleQuery, bounds: &BoundSet, c: &[Rational]) -> bool {
    let delta = delta(bounds);
    query
        .w
        .iter()
        .zip(&query.z)
        .all(|(w, z)| dot(w, c) <= z + &delta)
        && eval_f(query.data, query.scores, c) <= &query.t + &delta
}

/// First violated row of `W`, otherwise a subgradient of `F` at `c`.
pub fn separator(query: &OracleQuery, bounds: &BoundSet, c: &[Rational]) -> Result<Vec<Rational>> {
    let delta = delta(bounds);
    for (w, z) in query.w.iter().zip(&query.z) {
        if dot(w, c) > z + &delta {
            return Ok(w.clone());
        }
    }
    if eval_f(query.data, query.scores, c) > &query.t + &delta {
        return Ok(subgradient(query.data, query.scores, c));
    }
    Err(CoreError::Internal("separator requested at a member point".into()))
}

fn delta(bounds: &BoundSet) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bounds.q1)
}

/// Integer-scaled copy of a query for fast exact tests at dyadic points.
struct Scaled {
    n: usize,
    p: usize,
    x: Vec<Vec<BigInt>>,
    y: Vec<BigInt>,
    alpha: Vec<BigInt>,
    /// `Λ·Λ_α`: `F = F̃ / scale`.
    scale: BigInt,
    t_num: BigInt,
    t_den: BigInt,
    rows: Vec<ScaledRow>,
    q1: u64,
}

struct ScaledRow {
    w: Vec<BigInt>,
    z: BigInt,
    /// Multiplier turning the rational row into integers.
    k: BigInt,
}

/// `c = m · 2^e` with a shared exponent.
struct Dyadic {
    m: Vec<BigInt>,
    e: isize,
}

impl Dyadic {
    fn of(center: &[Float]) -> Dyadic {
        let parts: Vec<(BigInt, isize)> = center.iter().map(float::parts).collect();
        let e = parts
            .iter()
            .filter(|(m, _)| !m.is_zero())
            .map(|&(_, e)| e)
            .min()
            .unwrap_or(0);
        let m = parts
            .into_iter()
            .map(|(m, ei)| if m.is_zero() { m } else { m << (ei - e) as usize })
            .collect();
        Dyadic { m, e }
    }

    fn exact(&self) -> Vec<Rational> {
        self.m
            .iter()
            .map(|m| {
                if self.e >= 0 {
                    Rational::from_integer(m << self.e as usize)
                } else {
                    Rational::new(m.clone(), BigInt::one() << (-self.e) as usize)
                }
            })
            .collect()
    }
}

fn scale_rational_vec(values: &[Rational], k: &BigInt) -> Vec<BigInt> {
    let kr = Rational::from_integer(k.clone());
    values.iter().map(|v| (v * &kr).to_integer()).collect()
}

fn shl(v: &BigInt, s: isize) -> BigInt {
    debug_assert!(s >= 0);
    v << s as usize
}

enum Probe {
    Member,
    Cut { s: Vec<BigInt>, lower: Float },
}

impl Scaled {
    fn new(query: &OracleQuery, q1: u64) -> Self {
        let data = query.data;
        let lam = lcm_of_denominators(data.x().iter().flatten().chain(data.y()));
        let lam_a = lcm_of_denominators(query.scores.values());
        let rows = query
            .w
            .iter()
            .zip(&query.z)
            .map(|(w, z)| {
                let k = lcm_of_denominators(w.iter().chain(std::iter::once(z)));
                ScaledRow {
                    w: scale_rational_vec(w, &k),
                    z: (z * Rational::from_integer(k.clone())).to_integer(),
                    k,
                }
            })
            .collect();
        Scaled {
            n: data.n(),
            p: data.p(),
            x: data.x().iter().map(|r| scale_rational_vec(r, &lam)).collect(),
            y: scale_rational_vec(data.y(), &lam),
            alpha: scale_rational_vec(query.scores.values(), &lam_a),
            scale: &lam * &lam_a,
            t_num: query.t.numer().clone(),
            t_den: query.t.denom().clone(),
            rows,
            q1,
        }
    }

    /// Exact tests at the center; a cut direction plus a float lower bound
    /// of the violated quantity over the ellipsoid when the center fails.
    fn probe(&self, c: &Dyadic, ell: &Ellipsoid) -> Probe {
        let prec = ell.prec;
        let s = c.e.min(0);
        let up = c.e - s; // >= 0
        let q1 = self.q1 as isize;
        for row in &self.rows {
            let wm: BigInt = row.w.iter().zip(&c.m).map(|(a, b)| a * b).sum();
            let lhs = shl(&wm, up + q1);
            let rhs = shl(&row.z, q1 - s) + shl(&row.k, -s);
            if lhs > rhs {
                // w·c - sqrt(wᵀEw) versus z + δ, all scaled by k
                let sf: Vec<Float> = row.w.iter().map(|v| float::from_int(v, prec)).collect();
                let spread = ell.quad(&sf).sqrt();
                let value = dyadic_float(&wm, c.e, prec);
                let lower = value - spread - float::from_int(&row.z, prec);
                let slack = float::from_int(&row.k, prec) * pow2_float(-(self.q1 as isize), prec);
                return Probe::Cut {
                    s: row.w.clone(),
                    lower: lower - slack,
                };
            }
        }
        // Λ r_i = ρ_i 2^s
        let rho: Vec<BigInt> = (0..self.n)
            .map(|i| {
                let xm: BigInt = self.x[i].iter().zip(&c.m).map(|(a, b)| a * b).sum();
                shl(&self.y[i], -s) - shl(&xm, up)
            })
            .collect();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| rho[a].cmp(&rho[b]).then(a.cmp(&b)));
        let f_scaled: BigInt = order.iter().zip(&self.alpha).map(|(&i, a)| a * &rho[i]).sum();
        // F̃ 2^s / scale ≤ t + 2^-q1
        let lhs = (&f_scaled * &self.t_den) << self.q1 as usize;
        let rhs = &self.scale * ((&self.t_num << self.q1 as usize) + &self.t_den);
        let rhs = shl(&rhs, -s);
        if lhs <= rhs {
            return Probe::Member;
        }
        let mut g = vec![BigInt::zero(); self.p];
        for (&i, a) in order.iter().zip(&self.alpha) {
            if a.is_zero() {
                continue;
            }
            for (gj, xij) in g.iter_mut().zip(&self.x[i]) {
                *gj -= a * xij;
            }
        }
        let gf: Vec<Float> = g.iter().map(|v| float::from_int(v, prec)).collect();
        let scale = float::from_int(&self.scale, prec);
        let spread = ell.quad(&gf).sqrt() / &scale;
        let value = dyadic_float(&f_scaled, s, prec) / &scale;
        let bound = float::from_int(&self.t_num, prec) / float::from_int(&self.t_den, prec)
            + pow2_float(-(self.q1 as isize), prec);
        Probe::Cut {
            s: g,
            lower: value - spread - bound,
        }
    }
}

fn pow2_float(e: isize, prec: usize) -> Float {
    Float::from_parts(dashu_int::IBig::ONE, e).with_precision(prec).value()
}

fn dyadic_float(m: &BigInt, e: isize, prec: usize) -> Float {
    Float::from_parts(float::to_ibig(m), e).with_precision(prec).value()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// The center failed; the ellipsoid was cut with this direction.
    Cut(Vec<Rational>),
    Yes(Vec<Rational>),
    No,
}

/// A single oracle run, advanced one center test at a time.
pub struct OracleRun {
    scaled: Scaled,
    ellipsoid: Ellipsoid,
    budget: usize,
    iterations: usize,
    inflate: Float,
    early_exit: bool,
    infeasible_row: bool,
    margin: Float,
}

/// Number of central cuts after which the ellipsoid volume is below `2^-q2`.
pub fn iteration_budget(p: usize, bounds: &BoundSet) -> usize {
    if p == 1 {
        // interval of length 2^(q3+1) halves each step
        return (bounds.q3 + bounds.q2 + 3) as usize;
    }
    let pf = p as f64;
    let ln2 = std::f64::consts::LN_2;
    let half = pf / 2.0;
    let mut ln_gamma = 0.0;
    let mut g = half;
    while g > 1.0 {
        ln_gamma += g.ln();
        g -= 1.0;
    }
    if (g - 0.5).abs() < 1e-9 {
        ln_gamma += 0.5 * std::f64::consts::PI.ln();
    }
    let ln_v0 = half * std::f64::consts::PI.ln() - ln_gamma
        + pf * (0.5 * pf.ln() + bounds.q3 as f64 * ln2);
    let n = (2.0 * pf + 2.0) * (ln_v0 + bounds.q2 as f64 * ln2);
    (n * (1.0 + 1e-6)).ceil() as usize + 1
}

/// Mantissa length the run needs for the given bounds.
pub fn working_precision(p: usize, bounds: &BoundSet, config: &OracleConfig) -> usize {
    let need = if p == 1 {
        (2 * bounds.q3 + bounds.q2 + 128) as usize
    } else {
        (2 * (bounds.q2 + p as u64 * (bounds.q3 + 2)) + 64) as usize
    };
    config.min_precision.max(need)
}

impl OracleRun {
    pub fn new(query: &OracleQuery, bounds: &BoundSet, config: &OracleConfig) -> Result<Self> {
        let prec = working_precision(query.data.p(), bounds, config);
        Self::with_precision(query, bounds, config, prec)
    }

    pub fn with_precision(
        query: &OracleQuery,
        bounds: &BoundSet,
        config: &OracleConfig,
        prec: usize,
    ) -> Result<Self> {
        let p = query.data.p();
        if query.scores.len() != query.data.n() {
            return Err(CoreError::DimensionMismatch("score vector length must equal n".into()));
        }
        if query.w.len() != query.z.len() || query.w.iter().any(|r| r.len() != p) {
            return Err(CoreError::DimensionMismatch("constraint system shape".into()));
        }
        let scaled = Scaled::new(query, bounds.q1);
        let delta = delta(bounds);
        let infeasible_row = query
            .w
            .iter()
            .zip(&query.z)
            .any(|(w, z)| w.iter().all(Zero::is_zero) && z + &delta < Rational::zero());
        let mut scaled = scaled;
        scaled.rows.retain(|r| r.w.iter().any(|v| !v.is_zero()));
        // ball covering the cube [-2^q3, 2^q3]^p
        let r2 = Rational::from_integer(BigInt::from(p) << (2 * bounds.q3) as usize);
        let ellipsoid = Ellipsoid::ball(p, &r2, prec);
        let inflate = float::from_i64(1, prec) + pow2_float(-((prec / 4).min(64) as isize), prec);
        let margin = pow2_float(-((prec / 2) as isize), prec);
        Ok(OracleRun {
            scaled,
            ellipsoid,
            budget: iteration_budget(p, bounds),
            iterations: 0,
            inflate,
            early_exit: config.early_exit,
            infeasible_row,
            margin,
        })
    }

    pub fn ellipsoid(&self) -> &Ellipsoid {
        &self.ellipsoid
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn step(&mut self) -> Result<Step> {
        if self.infeasible_row || self.iterations >= self.budget {
            return Ok(Step::No);
        }
        let c = Dyadic::of(&self.ellipsoid.center);
        match self.scaled.probe(&c, &self.ellipsoid) {
            Probe::Member => Ok(Step::Yes(c.exact())),
            Probe::Cut { s, lower } => {
                self.iterations += 1;
                if self.early_exit && lower > self.margin {
                    return Ok(Step::No);
                }
                let prec = self.ellipsoid.prec;
                let sf: Vec<Float> = s.iter().map(|v| float::from_int(v, prec)).collect();
                let mut next = self.ellipsoid.cut(&sf)?;
                if next.dim() > 1 {
                    next.inflate(&self.inflate);
                    if !next.is_positive_definite() {
                        return Err(CoreError::PrecisionExhausted);
                    }
                }
                self.ellipsoid = next;
                Ok(Step::Cut(s.iter().map(|v| Rational::from_integer(v.clone())).collect()))
            }
        }
    }

    pub fn run(mut self) -> Result<OracleAnswer> {
        loop {
            match self.step()? {
                Step::Cut(_) => continue,
                Step::Yes(witness) => {
                    return Ok(OracleAnswer {
                        verdict: Verdict::Yes,
                        witness: Some(witness),
                        iterations: self.iterations,
                    })
                }
                Step::No => {
                    return Ok(OracleAnswer {
                        verdict: Verdict::No,
                        witness: None,
                        iterations: self.iterations,
                    })
                }
            }
        }
    }
}

pub fn oracle_a(query: &OracleQuery, bounds: &BoundSet, config: &OracleConfig) -> Result<OracleAnswer> {
    OracleRun::new(query, bounds, config)?.run()
}

pub fn oracle_a_star(
    data: &Dataset,
    scores: &ScoreVector,
    t: Rational,
    bounds: &BoundSet,
    config: &OracleConfig,
) -> Result<OracleAnswer> {
    oracle_a(&OracleQuery::star(data, scores, t), bounds, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numeric::{compute_bounds, int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn collinear() -> (Dataset, ScoreVector) {
        let d = Dataset::new(vec![ints(&[1]), ints(&[2]), ints(&[3])], ints(&[1, 2, 3])).unwrap();
        (d, ScoreVector::new(ints(&[-1, 0, 1])).unwrap())
    }

    #[test]
    fn central_cut_example() {
        let e = Ellipsoid::from_rational(&ints(&[0, 0]), &[ints(&[1, 0]), ints(&[0, 1])], 256);
        let cut = e.central_cut(&ints(&[1, 0])).unwrap();
        let c = cut.center();
        let tol = rat(1, 1 << 40);
        assert!((&c[0] + rat(1, 3)).abs() < tol && c[1].is_zero());
        let s = cut.shape();
        assert!((&s[0][0] - rat(4, 9)).abs() < tol);
        assert!((&s[1][1] - rat(4, 3)).abs() < tol);
        assert!(s[0][1].abs() < tol);
        // scale invariance
        let scaled = e.central_cut(&ints(&[5, 0])).unwrap();
        assert_eq!(scaled.center(), cut.center());
        assert_eq!(scaled.shape(), cut.shape());
        assert!(matches!(e.central_cut(&ints(&[0, 0])), Err(CoreError::DegenerateDirection)));
    }

    #[test]
    fn interval_cut() {
        let e = Ellipsoid::from_rational(&ints(&[0]), &[ints(&[4])], 128);
        let cut = e.central_cut(&ints(&[-3])).unwrap();
        assert_eq!(cut.center(), ints(&[1]));
        assert_eq!(cut.shape(), vec![ints(&[1])]);
    }

    #[test]
    fn collinear_queries() {
        let (d, a) = collinear();
        let b = compute_bounds(&d, &a).unwrap();
        let cfg = OracleConfig::default();
        let yes = oracle_a_star(&d, &a, int(0), &b, &cfg).unwrap();
        assert_eq!(yes.verdict, Verdict::Yes);
        let w = yes.witness.unwrap();
        assert!(eval_f(&d, &a, &w) <= delta(&b));
        let no = oracle_a_star(&d, &a, int(-1), &b, &cfg).unwrap();
        assert_eq!(no.verdict, Verdict::No);
        let huge = Rational::from_integer(BigInt::one() << b.q);
        assert_eq!(oracle_a_star(&d, &a, huge, &b, &cfg).unwrap().verdict, Verdict::Yes);
        let q = OracleQuery {
            data: &d,
            scores: &a,
            t: int(100),
            w: vec![ints(&[1]), ints(&[-1])],
            z: ints(&[-1, 0]),
        };
        assert_eq!(oracle_a(&q, &b, &cfg).unwrap().verdict, Verdict::No);
    }

    #[test]
    fn no_without_early_exit() {
        let (d, a) = collinear();
        let b = compute_bounds(&d, &a).unwrap();
        let cfg = OracleConfig {
            early_exit: false,
            ..OracleConfig::default()
        };
        let no = oracle_a_star(&d, &a, int(-1), &b, &cfg).unwrap();
        assert_eq!(no.verdict, Verdict::No);
        assert_eq!(no.iterations, iteration_budget(1, &b));
    }

    #[test]
    fn exact_membership_and_separation() {
        let (d, a) = collinear();
        let b = compute_bounds(&d, &a).unwrap();
        let q = OracleQuery::star(&d, &a, int(0));
        assert!(membership(&q, &b, &ints(&[1])));
        assert!(!membership(&q, &b, &ints(&[0])));
        assert_eq!(separator(&q, &b, &ints(&[0])).unwrap(), ints(&[-2]));
        assert!(separator(&q, &b, &ints(&[1])).is_err());
        let q = OracleQuery {
            data: &d,
            scores: &a,
            t: int(0),
            w: vec![ints(&[3])],
            z: ints(&[-1]),
        };
        assert_eq!(separator(&q, &b, &ints(&[0])).unwrap(), ints(&[3]));
        let q = OracleQuery::star(&d, &a, int(1000));
        assert!(membership(&q, &b, &ints(&[-7])));
    }

    #[test]
    fn two_dimensional_query() {
        // intercept plus slope through (0,1), (1,2), (2,4)
        let d = Dataset::new(
            vec![ints(&[1, 0]), ints(&[1, 1]), ints(&[1, 2])],
            ints(&[1, 2, 4]),
        )
        .unwrap();
        let a = ScoreVector::new(ints(&[-1, 0, 1])).unwrap();
        let b = compute_bounds(&d, &a).unwrap();
        let gen = crate::reference::brute_min(&d, &a, 7).unwrap();
        let t0 = gen.outcome.value().unwrap().clone();
        let cfg = OracleConfig::default();
        assert_eq!(oracle_a_star(&d, &a, t0.clone(), &b, &cfg).unwrap().verdict, Verdict::Yes);
        let below = &t0 - rat(1, 1 << 20);
        assert_eq!(oracle_a_star(&d, &a, below, &b, &cfg).unwrap().verdict, Verdict::No);
    }
}
