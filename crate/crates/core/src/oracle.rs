//! Grid checks of the defining inequalities of the stochastic orders.
//!
//! Each checker scans a grid in increasing order and reports the first
//! violation beyond the tolerance. Quantile spacings are compared on the
//! value scale; distribution functions, hazard rates, reversed hazard rates,
//! the log density ratio and the star-order ratio on the log scale.
//!
//! Points where a pmf vanishes follow `a/0 = ∞` for `a > 0`: a hazard whose
//! denominator is exactly zero counts as infinite, and points where both
//! densities vanish are left out of the likelihood-ratio scan.
//!
//! Truncated tables of unbounded laws carry a tail-mass bound. Their pmf is
//! unknown past the table, so density-based scans skip those points, and
//! tail probabilities enter log comparisons with their relative uncertainty
//! subtracted from the excess.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dist::{lattice_point, ContinuousDistribution, DiscreteDistribution, Distribution, SupportEnd};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_GRID_POINTS: usize = 4001;
pub const DEFAULT_QUANTILE_LEVELS: usize = 1001;
/// Lower quantile level spanned by default continuous grids.
pub const GRID_QUANTILE_EPS: f64 = 1e-9;
/// Upper-tail level spanned by default continuous grids. Hazard rates see
/// the tail beyond the last point, so the density scans must reach further
/// than the distribution functions need.
pub const GRID_UPPER_TAIL: f64 = 1e-15;
/// Combined mass of unbounded laws beyond a default discrete grid.
pub const GRID_TAIL_MASS: f64 = 1e-10;
/// Default continuous grids also reach down to this fraction of the smaller
/// median, where the left-end behavior decides the orders.
pub const GRID_LOWER_REACH: f64 = 1e-8;
/// Below the main grid, default continuous grids continue with
/// `GRID_FAR_POINTS_PER_DECADE` points per decade down to this fraction of
/// the smaller median. Log densities stay finite there even where the
/// distribution functions underflow.
pub const GRID_FAR_REACH: f64 = 1e-100;
pub const GRID_FAR_POINTS_PER_DECADE: usize = 4;

const MAX_SKIPPED_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    St,
    Hr,
    Rh,
    Lr,
    Lc,
    Disp,
    Star,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::St,
        Relation::Hr,
        Relation::Rh,
        Relation::Lr,
        Relation::Lc,
        Relation::Disp,
        Relation::Star,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::St => "st",
            Relation::Hr => "hr",
            Relation::Rh => "rh",
            Relation::Lr => "lr",
            Relation::Lc => "lc",
            Relation::Disp => "disp",
            Relation::Star => "star",
        }
    }

    /// Defined only between continuous laws.
    pub fn continuous_only(self) -> bool {
        matches!(self, Relation::Disp | Relation::Star)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse {
                offset: 0,
                message: format!("unknown order `{s}` (expected one of st, hr, rh, lr, lc, disp, star)"),
            })
    }
}

/// Points at which a defining inequality fails. One point for st, hr and
/// rh; a consecutive pair for lr, star and disp (probability levels for
/// disp); a consecutive triple for lc.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub points: Vec<f64>,
    /// Amount by which the inequality fails, on the checker's scale.
    pub excess: f64,
}

impl Witness {
    /// The failing point: the later point of a pair, the middle of a triple.
    pub fn point(&self) -> f64 {
        match self.points.as_slice() {
            [x] | [_, x] | [_, x, _] => *x,
            _ => self.points[0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub relation: Relation,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub tolerance: f64,
    pub points_checked: usize,
    pub points_skipped: usize,
    /// Largest excess seen anywhere; `−∞` when every point held strictly
    /// through the `a/0 = ∞` convention.
    pub max_excess: f64,
    /// Holds, but only within the tolerance somewhere.
    pub marginal: bool,
}

/// Evaluation points for the non-quantile checkers.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckGrid {
    /// `{0, 1, …, hi}`.
    Discrete { hi: u64 },
    /// Strictly increasing points in `(0, ∞)`.
    Continuous(Vec<f64>),
}

impl CheckGrid {
    pub fn continuous(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Grid("grid is empty".into()));
        }
        if let Some(bad) = points.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::Grid(format!("continuous grid points must be finite and positive, got {bad}")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Grid("grid points must be strictly increasing".into()));
        }
        Ok(CheckGrid::Continuous(points))
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            CheckGrid::Discrete { hi } => (0..=*hi).map(|x| x as f64).collect(),
            CheckGrid::Continuous(p) => p.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            CheckGrid::Discrete { hi } => *hi as usize + 1,
            CheckGrid::Continuous(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Default grid. Discrete pairs get every point up to the larger support
    /// end or tail cutoff. Continuous pairs get `n` geometric points from the
    /// lower of `GRID_QUANTILE_EPS` and `GRID_LOWER_REACH` times the smaller
    /// median up to the `GRID_UPPER_TAIL` upper quantile, preceded by a
    /// sparse extension down to `GRID_FAR_REACH` times the median.
    pub fn default_for(x: &Distribution, y: &Distribution, n: usize) -> Result<Self> {
        match (x, y) {
            (Distribution::Discrete(a), Distribution::Discrete(b)) => {
                // finite supports are scanned to their last point, where
                // reflected comparisons are decided
                let end = |d: &DiscreteDistribution| match d.upper() {
                    SupportEnd::Finite(n) => n,
                    SupportEnd::Unbounded => d.upper_cutoff(GRID_TAIL_MASS / 2.0),
                };
                Ok(CheckGrid::Discrete {
                    hi: end(a).max(end(b)),
                })
            }
            (Distribution::Continuous(a), Distribution::Continuous(b)) => {
                if n < 2 {
                    return Err(Error::Grid(format!("continuous grid needs at least 2 points, got {n}")));
                }
                let median = a.quantile(0.5)?.min(b.quantile(0.5)?);
                let lo = a
                    .quantile(GRID_QUANTILE_EPS)?
                    .min(b.quantile(GRID_QUANTILE_EPS)?)
                    .min(GRID_LOWER_REACH * median);
                let hi = a
                    .upper_quantile(GRID_UPPER_TAIL)?
                    .max(b.upper_quantile(GRID_UPPER_TAIL)?);
                let far = GRID_FAR_REACH * median;
                let mut pts = Vec::new();
                if far < lo {
                    let decades = (lo / far).log10();
                    let count = (decades * GRID_FAR_POINTS_PER_DECADE as f64).ceil() as usize + 1;
                    pts = geometric(far, lo, count);
                    pts.pop();
                }
                pts.extend(geometric(lo, hi, n));
                CheckGrid::continuous(pts)
            }
            _ => Err(mixed_kinds()),
        }
    }
}

fn mixed_kinds() -> Error {
    Error::Incompatible("cannot compare a discrete with a continuous distribution".into())
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln();
    let mut pts: Vec<f64> = (0..n)
        .map(|i| lo * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect();
    pts[n - 1] = hi;
    pts.dedup();
    pts
}

/// `n` probability levels whose logits are evenly spaced over
/// `[logit ε, logit(1 − ε)]`.
pub fn default_quantile_levels(n: usize) -> Vec<f64> {
    let z_max = ((1.0 - GRID_QUANTILE_EPS) / GRID_QUANTILE_EPS).ln();
    let mut levels: Vec<f64> = (0..n)
        .map(|i| {
            let z = -z_max + 2.0 * z_max * i as f64 / (n.max(2) - 1) as f64;
            1.0 / (1.0 + (-z).exp())
        })
        .collect();
    levels.dedup();
    levels
}

/// Tolerance, grid size and tail settings shared by a batch of checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub tol: f64,
    pub grid_points: usize,
    pub quantile_levels: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            grid_points: DEFAULT_GRID_POINTS,
            quantile_levels: DEFAULT_QUANTILE_LEVELS,
        }
    }
}

/// Runs one checker with default grids built from `cfg`.
pub fn check(relation: Relation, x: &Distribution, y: &Distribution, cfg: &OracleConfig) -> Result<OrderVerdict> {
    if relation == Relation::Disp {
        return check_disp(x, y, &default_quantile_levels(cfg.quantile_levels), cfg.tol);
    }
    let grid = CheckGrid::default_for(x, y, cfg.grid_points)?;
    match relation {
        Relation::St => check_st(x, y, &grid, cfg.tol),
        Relation::Hr => check_hr(x, y, &grid, cfg.tol),
        Relation::Rh => check_rh(x, y, &grid, cfg.tol),
        Relation::Lr => check_lr(x, y, &grid, cfg.tol),
        Relation::Lc => check_lc(x, y, &grid, cfg.tol),
        Relation::Star => check_star(x, y, &grid, cfg.tol),
        Relation::Disp => unreachable!(),
    }
}

/// Outcome of one inequality evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Checked(f64),
    /// A denominator is too small to trust; counted against the skip budget.
    Skipped,
    /// Outside the set the definition quantifies over.
    Excluded,
}

struct Scan {
    relation: Relation,
    tol: f64,
    checked: usize,
    skipped: usize,
    max_excess: f64,
    witness: Option<Witness>,
}

impl Scan {
    fn new(relation: Relation, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self {
            relation,
            tol,
            checked: 0,
            skipped: 0,
            max_excess: f64::NEG_INFINITY,
            witness: None,
        })
    }

    fn record(&mut self, points: &[f64], outcome: Outcome) {
        match outcome {
            Outcome::Checked(e) => {
                self.checked += 1;
                if e > self.max_excess || e.is_nan() {
                    self.max_excess = e;
                }
                if self.witness.is_none() && !(e <= self.tol) {
                    self.witness = Some(Witness {
                        points: points.to_vec(),
                        excess: e,
                    });
                }
            }
            Outcome::Skipped => self.skipped += 1,
            Outcome::Excluded => {}
        }
    }

    fn finish(self) -> Result<OrderVerdict> {
        let total = self.checked + self.skipped;
        if self.skipped as f64 > MAX_SKIPPED_FRACTION * total as f64 {
            return Err(Error::Degenerate {
                skipped: self.skipped,
                total,
            });
        }
        if self.checked == 0 {
            return Err(Error::Grid("no grid point could be checked".into()));
        }
        let holds = self.witness.is_none();
        Ok(OrderVerdict {
            relation: self.relation,
            holds,
            marginal: holds && self.max_excess > 0.0,
            witness: self.witness,
            tolerance: self.tol,
            points_checked: self.checked,
            points_skipped: self.skipped,
            max_excess: self.max_excess,
        })
    }
}

fn same_kind(x: &Distribution, y: &Distribution, grid: &CheckGrid) -> Result<()> {
    match (x, y, grid) {
        (Distribution::Discrete(_), Distribution::Discrete(_), CheckGrid::Discrete { .. })
        | (Distribution::Continuous(_), Distribution::Continuous(_), CheckGrid::Continuous(_)) => Ok(()),
        (Distribution::Discrete(_), Distribution::Discrete(_), _)
        | (Distribution::Continuous(_), Distribution::Continuous(_), _) => {
            Err(Error::Grid("grid kind does not match the distributions".into()))
        }
        _ => Err(mixed_kinds()),
    }
}

/// `b − a`, with equal infinities treated as no change.
fn step(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        b - a
    }
}

/// Whether the density at `p` is known; it is not past the table of an
/// unbounded discrete law.
fn resolved(d: &Distribution, p: f64) -> bool {
    match d {
        Distribution::Discrete(t) => t.upper() != SupportEnd::Unbounded || p <= t.table_max() as f64,
        Distribution::Continuous(_) => true,
    }
}

/// A probability whose true value is within relative distance `rel` of
/// `value`. Zeros are exact only for tables; a continuous zero is underflow.
#[derive(Debug, Clone, Copy)]
struct Prob {
    value: f64,
    rel: f64,
    exact_zero: bool,
}

impl Prob {
    fn continuous(value: f64) -> Self {
        Self {
            value,
            rel: 0.0,
            exact_zero: false,
        }
    }

    fn with_bound(value: f64, bound: f64) -> Self {
        let rel = if value > 0.0 { bound / value } else { 0.0 };
        Self {
            value,
            rel,
            exact_zero: true,
        }
    }

    /// Normal floating-point values and exact zeros.
    fn usable(self) -> bool {
        self.value >= f64::MIN_POSITIVE || (self.value == 0.0 && self.exact_zero)
    }

    /// Largest change of `ln value` the uncertainty allows; `None` when the
    /// value is mostly uncertainty.
    fn ln_slack(self) -> Option<f64> {
        (self.rel < 0.5).then(|| -(-self.rel).ln_1p())
    }
}

enum Side {
    /// `P(X ≥ x)` for discrete laws, `P(X > x)` otherwise.
    Hazard,
    /// `P(X > x)`.
    Survival,
    Cdf,
}

fn prob(d: &Distribution, x: f64, side: Side) -> Result<Prob> {
    Ok(match d {
        Distribution::Discrete(t) => {
            let k = lattice_point(x)?;
            let v = match side {
                Side::Hazard => t.at_least(k),
                Side::Survival => t.survival(k),
                Side::Cdf => t.cdf(k),
            };
            Prob::with_bound(v, t.tail_mass_bound())
        }
        Distribution::Continuous(c) => Prob::continuous(match side {
            Side::Hazard | Side::Survival => c.survival(x),
            Side::Cdf => c.cdf(x),
        }),
    })
}

/// `sign · (ln(a_Y/d_Y) − ln(a_X/d_X))` from log numerators, less the log
/// uncertainty of the denominators, with `a/0 = ∞` for exact zeros. A point
/// where one denominator underflows is degenerate; where both do it lies
/// outside the resolvable range.
fn log_ratio_outcome(ln_ax: f64, dx: Prob, ln_ay: f64, dy: Prob, sign: f64) -> Outcome {
    match (dx.usable(), dy.usable()) {
        (false, false) => return Outcome::Excluded,
        (false, true) | (true, false) => return Outcome::Skipped,
        _ => {}
    }
    let excess_if_x_infinite = -sign * f64::INFINITY;
    match (dx.value == 0.0, dy.value == 0.0) {
        (true, true) => return Outcome::Excluded,
        (true, false) => return Outcome::Checked(excess_if_x_infinite),
        (false, true) => return Outcome::Checked(-excess_if_x_infinite),
        _ => {}
    }
    let (Some(sx), Some(sy)) = (dx.ln_slack(), dy.ln_slack()) else {
        return Outcome::Excluded;
    };
    let lx = ln_ax - dx.value.ln();
    let ly = ln_ay - dy.value.ln();
    Outcome::Checked(sign * step(lx, ly) - sx - sy)
}

/// `F̄_X ≤ F̄_Y`, compared as `ln F_Y ≤ ln F_X` while either cdf is at most
/// ½ and as `ln F̄_X ≤ ln F̄_Y` above.
fn st_at(x: &Distribution, y: &Distribution, p: f64) -> Result<Outcome> {
    let (cx, cy) = (prob(x, p, Side::Cdf)?, prob(y, p, Side::Cdf)?);
    if cx.value.min(cy.value) <= 0.5 {
        return Ok(log_ratio_outcome(0.0, cx, 0.0, cy, -1.0));
    }
    let (sx, sy) = (prob(x, p, Side::Survival)?, prob(y, p, Side::Survival)?);
    Ok(log_ratio_outcome(0.0, sx, 0.0, sy, 1.0))
}

fn hr_at(x: &Distribution, y: &Distribution, p: f64) -> Result<Outcome> {
    if !(resolved(x, p) && resolved(y, p)) {
        return Ok(Outcome::Excluded);
    }
    Ok(log_ratio_outcome(
        x.ln_density(p)?,
        prob(x, p, Side::Hazard)?,
        y.ln_density(p)?,
        prob(y, p, Side::Hazard)?,
        1.0,
    ))
}

fn rh_at(x: &Distribution, y: &Distribution, p: f64) -> Result<Outcome> {
    if !(resolved(x, p) && resolved(y, p)) {
        return Ok(Outcome::Excluded);
    }
    Ok(log_ratio_outcome(
        x.ln_density(p)?,
        prob(x, p, Side::Cdf)?,
        y.ln_density(p)?,
        prob(y, p, Side::Cdf)?,
        -1.0,
    ))
}

fn log_ratio(x: &Distribution, y: &Distribution, p: f64) -> Result<f64> {
    Ok(x.ln_density(p)? - y.ln_density(p)?)
}

/// `ln f_X − ln f_Y` with `ln(a/0) = +∞`; `None` where both vanish or
/// either density is unknown.
fn extended_log_ratio(x: &Distribution, y: &Distribution, p: f64) -> Result<Option<f64>> {
    if !(resolved(x, p) && resolved(y, p)) {
        return Ok(None);
    }
    let (lx, ly) = (x.ln_density(p)?, y.ln_density(p)?);
    Ok(match (lx > f64::NEG_INFINITY, ly > f64::NEG_INFINITY) {
        (false, false) => None,
        (true, false) => Some(f64::INFINITY),
        (false, true) => Some(f64::NEG_INFINITY),
        (true, true) => Some(lx - ly),
    })
}

fn lr_pair(x: &Distribution, y: &Distribution, a: f64, b: f64) -> Result<Outcome> {
    match (extended_log_ratio(x, y, a)?, extended_log_ratio(x, y, b)?) {
        (Some(la), Some(lb)) => Ok(Outcome::Checked(step(la, lb))),
        _ => Ok(Outcome::Excluded),
    }
}

/// Concavity defect of `l` at the middle of a triple: the second difference
/// on the integer lattice, the gap between chord and curve on a continuous
/// grid.
fn lc_triple(x: &Distribution, y: &Distribution, pts: [f64; 3]) -> Result<Outcome> {
    let [a, b, c] = pts;
    let (la, lb, lc) = (log_ratio(x, y, a)?, log_ratio(x, y, b)?, log_ratio(x, y, c)?);
    if !(la.is_finite() && lb.is_finite() && lc.is_finite()) {
        return Ok(Outcome::Excluded);
    }
    let defect = if x.is_discrete() {
        la - 2.0 * lb + lc
    } else {
        la + (lc - la) * (b - a) / (c - a) - lb
    };
    Ok(Outcome::Checked(defect))
}

/// `ln(G⁻¹(F(p)) / p)`, inverting through the survival function in the
/// upper half; `None` when `F(p)` or `F̄(p)` is zero or subnormal.
fn star_log_ratio(x: &ContinuousDistribution, y: &ContinuousDistribution, p: f64) -> Result<Option<f64>> {
    let u = x.cdf(p);
    let q = if u <= 0.5 {
        if u < f64::MIN_POSITIVE {
            return Ok(None);
        }
        y.quantile(u)?
    } else {
        let s = x.survival(p);
        if s < f64::MIN_POSITIVE {
            return Ok(None);
        }
        y.upper_quantile(s)?
    };
    Ok(Some(q.ln() - p.ln()))
}

fn star_pair(x: &ContinuousDistribution, y: &ContinuousDistribution, a: f64, b: f64) -> Result<Outcome> {
    match (star_log_ratio(x, y, a)?, star_log_ratio(x, y, b)?) {
        (Some(ra), Some(rb)) => Ok(Outcome::Checked(ra - rb)),
        _ => Ok(Outcome::Excluded),
    }
}

/// `F⁻¹(u)`, with `s = 1 − u` exact for `u ≥ ½`.
fn quantile_at(d: &ContinuousDistribution, u: f64) -> Result<f64> {
    if u <= 0.5 {
        d.quantile(u)
    } else {
        d.upper_quantile(1.0 - u)
    }
}

fn disp_pair(x: &ContinuousDistribution, y: &ContinuousDistribution, a: f64, b: f64) -> Result<Outcome> {
    let sx = quantile_at(x, b)? - quantile_at(x, a)?;
    let sy = quantile_at(y, b)? - quantile_at(y, a)?;
    Ok(Outcome::Checked(sx - sy))
}

fn continuous_pair<'a>(
    x: &'a Distribution,
    y: &'a Distribution,
) -> Result<(&'a ContinuousDistribution, &'a ContinuousDistribution)> {
    match (x, y) {
        (Distribution::Continuous(a), Distribution::Continuous(b)) => Ok((a, b)),
        _ => Err(Error::Incompatible(
            "star and dispersive orders are defined for continuous distributions only".into(),
        )),
    }
}

/// `F̄_X ≤ F̄_Y + tol` pointwise.
pub fn check_st(x: &Distribution, y: &Distribution, grid: &CheckGrid, tol: f64) -> Result<OrderVerdict> {
    same_kind(x, y, grid)?;
    let mut scan = Scan::new(Relation::St, tol)?;
    for p in grid.points() {
        scan.record(&[p], st_at(x, y, p)?);
    }
    scan.finish()
}

/// `ln r_X ≥ ln r_Y − tol` for the hazard rates `r`.
pub fn check_hr(x: &Distribution, y: &Distribution, grid: &CheckGrid, tol: f64) -> Result<OrderVerdict> {
    same_kind(x, y, grid)?;
    let mut scan = Scan::new(Relation::Hr, tol)?;
    for p in grid.points() {
        scan.record(&[p], hr_at(x, y, p)?);
    }
    scan.finish()
}

/// `ln r̃_X ≤ ln r̃_Y + tol` for the reversed hazard rates `r̃ = f/F`.
pub fn check_rh(x: &Distribution, y: &Distribution, grid: &CheckGrid, tol: f64) -> Result<OrderVerdict> {
    same_kind(x, y, grid)?;
    let mut scan = Scan::new(Relation::Rh, tol)?;
    for p in grid.points() {
        scan.record(&[p], rh_at(x, y, p)?);
    }
    scan.finish()
}

/// `ln(f_X/f_Y)` nonincreasing over the points where either density is
/// positive.
pub fn check_lr(x: &Distribution, y: &Distribution, grid: &CheckGrid, tol: f64) -> Result<OrderVerdict> {
    same_kind(x, y, grid)?;
    let mut scan = Scan::new(Relation::Lr, tol)?;
    let mut kept = Vec::new();
    for p in grid.points() {
        if extended_log_ratio(x, y, p)?.is_some() {
            kept.push(p);
        }
    }
    for w in kept.windows(2) {
        scan.record(w, lr_pair(x, y, w[0], w[1])?);
    }
    if kept.len() == 1 {
        scan.record(&kept, Outcome::Checked(f64::NEG_INFINITY));
    }
    scan.finish()
}

/// Support nesting, then concavity of `ln(f_X/f_Y)` on the support of X.
pub fn check_lc(x: &Distribution, y: &Distribution, grid: &CheckGrid, tol: f64) -> Result<OrderVerdict> {
    same_kind(x, y, grid)?;
    if let (Distribution::Discrete(a), Distribution::Discrete(b)) = (x, y) {
        let nested = match (a.upper(), b.upper()) {
            (_, SupportEnd::Unbounded) => true,
            (SupportEnd::Finite(n), SupportEnd::Finite(m)) => n <= m,
            (SupportEnd::Unbounded, SupportEnd::Finite(_)) => false,
        };
        if !nested {
            return Err(Error::Support(format!(
                "support of X ({:?}) is not contained in support of Y ({:?})",
                a.upper(),
                b.upper()
            )));
        }
    }
    let mut on_support = Vec::new();
    for p in grid.points() {
        if !(resolved(x, p) && resolved(y, p)) {
            continue;
        }
        if x.ln_density(p)? > f64::NEG_INFINITY {
            if y.ln_density(p)? == f64::NEG_INFINITY {
                return Err(Error::Support(format!("X has mass at {p} where Y has none")));
            }
            on_support.push(p);
        }
    }
    let mut scan = Scan::new(Relation::Lc, tol)?;
    for w in on_support.windows(3) {
        scan.record(w, lc_triple(x, y, [w[0], w[1], w[2]])?);
    }
    // fewer than three support points leave nothing to bend
    if on_support.len() < 3 && !on_support.is_empty() {
        scan.record(&on_support[..1], Outcome::Checked(f64::NEG_INFINITY));
    }
    scan.finish()
}

/// `ln(G⁻¹(F(x))/x)` nondecreasing over the grid.
pub fn check_star(x: &Distribution, y: &Distribution, grid: &CheckGrid, tol: f64) -> Result<OrderVerdict> {
    let (a, b) = continuous_pair(x, y)?;
    same_kind(x, y, grid)?;
    let mut scan = Scan::new(Relation::Star, tol)?;
    let pts = grid.points();
    for w in pts.windows(2) {
        scan.record(w, star_pair(a, b, w[0], w[1])?);
    }
    scan.finish()
}

/// Quantile spacings of X never exceed those of Y by more than `tol` over
/// consecutive levels; by telescoping this covers every pair of levels.
pub fn check_disp(x: &Distribution, y: &Distribution, levels: &[f64], tol: f64) -> Result<OrderVerdict> {
    let (a, b) = continuous_pair(x, y)?;
    if levels.len() < 2 {
        return Err(Error::Grid("dispersive check needs at least two levels".into()));
    }
    if let Some(bad) = levels.iter().find(|u| !(**u > 0.0 && **u < 1.0)) {
        return Err(Error::Grid(format!("quantile levels must lie in (0, 1), got {bad}")));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Grid("quantile levels must be strictly increasing".into()));
    }
    let mut scan = Scan::new(Relation::Disp, tol)?;
    for w in levels.windows(2) {
        scan.record(w, disp_pair(a, b, w[0], w[1])?);
    }
    scan.finish()
}

/// Re-evaluates the defining inequality of `relation` at a witness and
/// returns the excess, or `None` if the witness lies outside the checked
/// set.
pub fn recheck(relation: Relation, x: &Distribution, y: &Distribution, witness: &Witness) -> Result<Option<f64>> {
    let pts = &witness.points;
    let need = |n: usize| {
        if pts.len() == n {
            Ok(())
        } else {
            Err(Error::Grid(format!("{relation} witness needs {n} points, got {}", pts.len())))
        }
    };
    let outcome = match relation {
        Relation::St => {
            need(1)?;
            st_at(x, y, pts[0])?
        }
        Relation::Hr => {
            need(1)?;
            hr_at(x, y, pts[0])?
        }
        Relation::Rh => {
            need(1)?;
            rh_at(x, y, pts[0])?
        }
        Relation::Lr => {
            need(2)?;
            lr_pair(x, y, pts[0], pts[1])?
        }
        Relation::Lc => {
            need(3)?;
            lc_triple(x, y, [pts[0], pts[1], pts[2]])?
        }
        Relation::Star => {
            need(2)?;
            let (a, b) = continuous_pair(x, y)?;
            star_pair(a, b, pts[0], pts[1])?
        }
        Relation::Disp => {
            need(2)?;
            let (a, b) = continuous_pair(x, y)?;
            disp_pair(a, b, pts[0], pts[1])?
        }
    };
    Ok(match outcome {
        Outcome::Checked(e) => Some(e),
        Outcome::Skipped | Outcome::Excluded => None,
    })
}
