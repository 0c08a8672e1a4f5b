//! Comparison reports: every requested order is decided by the grid oracle
//! and, where the pair matches one of the closed-form rules, by the rule as
//! well. Disagreement between the two is flagged.
//!
//! All numbers leave this module rounded to [`SIGNIFICANT_DIGITS`], so
//! reports are byte-stable across runs and platforms.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::criteria::{
    binomial_mixture_criteria, binomial_mixture_thresholds, expfam_mixture_criteria, expfam_mixture_thresholds,
    gamma_convolution_criteria, gamma_convolution_thresholds, gamma_disp_criterion, gamma_mixture_criteria,
    negbin_convolution_criteria, negbin_convolution_thresholds, negbin_mixture_criteria, poisson_binomial_criteria,
    poisson_binomial_thresholds, BinomialDirection, CriterionResult, Direction, ExponentialFamilyKernel, Orientation,
    PoissonBinomialDirection, ThresholdPair,
};
use crate::dist::{Distribution, Family, FiniteMixingMeasure, GammaConvolutionSpec, DEFAULT_TAIL_TOL};
use crate::error::{Error, Result};
use crate::expr::DistSpec;
use crate::oracle::{
    check_disp, check_hr, check_lc, check_lr, check_rh, check_st, check_star, default_quantile_levels, CheckGrid,
    OrderVerdict, Relation, DEFAULT_GRID_POINTS, DEFAULT_QUANTILE_LEVELS, DEFAULT_TOL,
};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Orders compared when none are requested.
pub const DEFAULT_ORDERS: [Relation; 4] = [Relation::St, Relation::Hr, Relation::Rh, Relation::Lr];

pub const TOOL_NAME: &str = "storder";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default continuous grid size for curve tables, dense enough for
/// trapezoid quadrature over the rows to be accurate to about 1e-7.
pub const CURVE_GRID_POINTS: usize = 20_001;

/// Header of the curve table.
pub const CURVE_COLUMNS: [&str; 10] = [
    "x",
    "density_x",
    "density_y",
    "cdf_x",
    "cdf_y",
    "survival_x",
    "survival_y",
    "hazard_x",
    "hazard_y",
    "log_ratio",
];

/// Process exit statuses.
pub mod exit {
    pub const HOLDS: i32 = 0;
    pub const FAILS: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const DISCREPANCY: i32 = 3;
}

/// Exit status for an error raised before a report exists. Input problems
/// are usage errors; numerical breakdowns count as internal failures.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Domain(_) | Error::Incompatible(_) | Error::Support(_) | Error::Grid(_) | Error::Empty(_) => {
            exit::USAGE
        }
        Error::NonConvergence(_) | Error::Degenerate { .. } | Error::Bracketing(_) | Error::TableCap { .. } => {
            exit::DISCREPANCY
        }
    }
}

/// `v` rounded to [`SIGNIFICANT_DIGITS`].
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().unwrap_or(v)
}

/// Locale-independent text for `v` at [`SIGNIFICANT_DIGITS`]; plain
/// decimals in `[1e-5, 1e15)`, exponent notation elsewhere.
pub fn format_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(v);
    let a = r.abs();
    if r == 0.0 || (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// A number serialized at [`SIGNIFICANT_DIGITS`]; non-finite values become
/// the strings `inf`, `-inf` and `nan`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(round_sig(self.0))
        } else {
            s.serialize_str(&format_num(self.0))
        }
    }
}

fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

/// Oracle and tail settings for a comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub tol: f64,
    pub grid_points: usize,
    pub quantile_levels: usize,
    /// Mass dropped from unbounded discrete tables.
    pub tail_tol: f64,
    /// Recorded in the report; no comparison path samples.
    pub seed: u64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            grid_points: DEFAULT_GRID_POINTS,
            quantile_levels: DEFAULT_QUANTILE_LEVELS,
            tail_tol: DEFAULT_TAIL_TOL,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    fn current() -> Self {
        Self {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub x: String,
    pub y: String,
    pub orders: Vec<Relation>,
    pub tol: Num,
    pub grid_points: usize,
    pub quantile_levels: usize,
    pub tail_tol: Num,
    pub seed: u64,
}

/// The closed-form rule matched by a pair.
#[derive(Debug, Clone, Serialize)]
pub struct RuleInfo {
    pub name: &'static str,
    /// Free parameter the thresholds refer to.
    pub parameter: &'static str,
    pub value: Num,
    pub orientation: Orientation,
    pub direction: Direction,
    /// Threshold of the group containing ≤st.
    pub st_group: [Relation; 2],
    pub st_threshold: Num,
    /// Threshold of the group containing ≤lr.
    pub lr_group: [Relation; 2],
    pub lr_threshold: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    /// `lattice` (every integer from `min` to `max`) or `geometric`.
    pub kind: &'static str,
    pub points: usize,
    pub min: Num,
    pub max: Num,
    /// Probability levels used by the dispersive check.
    pub quantile_levels: usize,
}

impl GridInfo {
    fn new(grid: &CheckGrid, quantile_levels: usize) -> Self {
        let (kind, min, max) = match grid {
            CheckGrid::Discrete { hi } => ("lattice", 0.0, *hi as f64),
            CheckGrid::Continuous(p) => ("geometric", p[0], p[p.len() - 1]),
        };
        Self {
            kind,
            points: grid.len(),
            min: Num(min),
            max: Num(max),
            quantile_levels,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionEntry {
    pub holds: bool,
    /// The inequality as evaluated, `lhs ≤ rhs`; absent for verdicts that
    /// follow from the rule's structure alone.
    pub form: Option<&'static str>,
    pub lhs: Option<Num>,
    pub rhs: Option<Num>,
    pub threshold: Option<Num>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessEntry {
    pub points: Vec<Num>,
    pub excess: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleEntry {
    pub holds: bool,
    /// Holds only within the tolerance somewhere.
    pub marginal: bool,
    pub tolerance: Num,
    pub points_checked: usize,
    pub points_skipped: usize,
    pub max_excess: Num,
    pub witness: Option<WitnessEntry>,
}

impl From<&OrderVerdict> for OracleEntry {
    fn from(v: &OrderVerdict) -> Self {
        Self {
            holds: v.holds,
            marginal: v.marginal,
            tolerance: Num(v.tolerance),
            points_checked: v.points_checked,
            points_skipped: v.points_skipped,
            max_excess: Num(v.max_excess),
            witness: v.witness.as_ref().map(|w| WitnessEntry {
                points: nums(&w.points),
                excess: Num(w.excess),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderEntry {
    pub relation: Relation,
    /// The oracle verdict.
    pub holds: bool,
    pub criterion: Option<CriterionEntry>,
    pub oracle: OracleEntry,
    pub discrepancy: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub tool: ToolInfo,
    pub input: InputEcho,
    pub rule: Option<RuleInfo>,
    pub grid: GridInfo,
    pub orders: Vec<OrderEntry>,
    pub all_hold: bool,
    pub discrepancy: bool,
    pub exit_code: i32,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("relation,holds,criterion,discrepancy,marginal,lhs,rhs,threshold,witness,excess\n");
        let opt = |v: Option<Num>| v.map_or(String::new(), |n| format_num(n.0));
        for e in &self.orders {
            let c = e.criterion.as_ref();
            let w = e.oracle.witness.as_ref();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                e.relation,
                e.holds,
                c.map_or(String::new(), |c| c.holds.to_string()),
                e.discrepancy,
                e.oracle.marginal,
                opt(c.and_then(|c| c.lhs)),
                opt(c.and_then(|c| c.rhs)),
                opt(c.and_then(|c| c.threshold)),
                w.map_or(String::new(), |w| w.points.iter().map(|p| format_num(p.0)).collect::<Vec<_>>().join(" ")),
                opt(w.map(|w| w.excess)),
            );
        }
        out
    }
}

/// A closed-form rule instantiated for one pair.
enum Rule {
    ExpFamily {
        family: Family,
        theta: f64,
        mu: FiniteMixingMeasure,
    },
    Binomial {
        n: u64,
        p: f64,
        mu: FiniteMixingMeasure,
        direction: BinomialDirection,
    },
    PoissonBinomial {
        spec: crate::dist::PoissonBinomialSpec,
        p: f64,
        direction: PoissonBinomialDirection,
    },
    GammaConvolution {
        spec: GammaConvolutionSpec,
        beta: f64,
    },
    NegBinConvolution {
        spec: crate::dist::NegBinConvolutionSpec,
        p: f64,
    },
}

/// Fixed parameters must agree this closely for a rule to apply.
const SHAPE_MATCH_TOL: f64 = 1e-12;

fn same_shape(a: f64, b: f64) -> bool {
    (a - b).abs() <= SHAPE_MATCH_TOL * a.abs().max(b.abs())
}

fn same_family(a: &Family, b: &Family) -> bool {
    match (a, b) {
        (Family::Poisson, Family::Poisson) => true,
        (Family::Binomial { n }, Family::Binomial { n: m }) => n == m,
        (Family::NegBin { k }, Family::NegBin { k: j }) => same_shape(*k, *j),
        (Family::Gamma { alpha }, Family::Gamma { alpha: a }) => same_shape(*alpha, *a),
        _ => false,
    }
}

/// A family member, including one-atom mixtures.
fn member(spec: &DistSpec) -> Option<(Family, f64)> {
    match spec {
        DistSpec::Mixture { family, measure } if measure.atoms().len() == 1 => Some((*family, measure.atoms()[0].0)),
        _ => spec.as_member(),
    }
}

/// The mixing measure of `spec` over `family`; members are point masses.
fn measure_over(spec: &DistSpec, family: &Family) -> Option<FiniteMixingMeasure> {
    match spec {
        DistSpec::Mixture { family: f, measure } if same_family(f, family) => Some(measure.clone()),
        _ => match member(spec) {
            Some((f, t)) if same_family(&f, family) => Some(FiniteMixingMeasure::point(t)),
            _ => None,
        },
    }
}

fn match_rule(x: &DistSpec, y: &DistSpec) -> Option<Rule> {
    if let Some((family, theta)) = member(x) {
        if let Some(mu) = measure_over(y, &family) {
            return Some(match family {
                Family::Binomial { n } => Rule::Binomial {
                    n,
                    p: theta,
                    mu,
                    direction: BinomialDirection::PlainVsMixture,
                },
                _ => Rule::ExpFamily { family, theta, mu },
            });
        }
    }
    if let Some((Family::Binomial { n }, p)) = member(y) {
        if let Some(mu) = measure_over(x, &Family::Binomial { n }) {
            return Some(Rule::Binomial {
                n,
                p,
                mu,
                direction: BinomialDirection::MixtureVsPlain,
            });
        }
    }
    match (x, y) {
        (DistSpec::PoissonBinomial(s), DistSpec::Binomial { n, p }) if s.len() as u64 == *n => {
            Some(Rule::PoissonBinomial {
                spec: s.clone(),
                p: *p,
                direction: PoissonBinomialDirection::SumVsBinomial,
            })
        }
        (DistSpec::Binomial { n, p }, DistSpec::PoissonBinomial(s)) if s.len() as u64 == *n => {
            Some(Rule::PoissonBinomial {
                spec: s.clone(),
                p: *p,
                direction: PoissonBinomialDirection::BinomialVsSum,
            })
        }
        (DistSpec::Gamma { alpha, beta }, DistSpec::GammaConvolution(s)) if same_shape(*alpha, s.total_shape()) => {
            Some(Rule::GammaConvolution {
                spec: s.clone(),
                beta: *beta,
            })
        }
        (DistSpec::NegBin { k, p }, DistSpec::NegBinConvolution(s)) if same_shape(*k, s.total_size()) => {
            Some(Rule::NegBinConvolution { spec: s.clone(), p: *p })
        }
        _ => None,
    }
}

impl Rule {
    fn name(&self) -> &'static str {
        match self {
            Rule::ExpFamily { family, .. } => match family {
                Family::Poisson => "poisson_mixture",
                Family::NegBin { .. } => "negbin_mixture",
                Family::Gamma { .. } => "gamma_mixture",
                Family::Binomial { .. } => "binomial_mixture",
            },
            Rule::Binomial { .. } => "binomial_mixture",
            Rule::PoissonBinomial { .. } => "poisson_binomial",
            Rule::GammaConvolution { .. } => "gamma_convolution",
            Rule::NegBinConvolution { .. } => "negbin_convolution",
        }
    }

    fn parameter(&self) -> (&'static str, f64) {
        match *self {
            Rule::ExpFamily { family, theta, .. } => match family {
                Family::Poisson => ("lambda", theta),
                Family::Gamma { .. } => ("beta", theta),
                _ => ("p", theta),
            },
            Rule::Binomial { p, .. } | Rule::PoissonBinomial { p, .. } | Rule::NegBinConvolution { p, .. } => ("p", p),
            Rule::GammaConvolution { beta, .. } => ("beta", beta),
        }
    }

    fn criteria(&self) -> Result<CriterionResult> {
        match self {
            Rule::ExpFamily { family, theta, mu } => match *family {
                Family::NegBin { k } => negbin_mixture_criteria(k, *theta, mu),
                Family::Gamma { alpha } => gamma_mixture_criteria(alpha, *theta, mu),
                f => expfam_mixture_criteria(&ExponentialFamilyKernel::new(f)?, *theta, mu),
            },
            Rule::Binomial { n, p, mu, direction } => binomial_mixture_criteria(*n, *p, mu, *direction),
            Rule::PoissonBinomial { spec, p, direction } => poisson_binomial_criteria(spec, *p, *direction),
            Rule::GammaConvolution { spec, beta } => gamma_convolution_criteria(spec, *beta),
            Rule::NegBinConvolution { spec, p } => negbin_convolution_criteria(spec, *p),
        }
    }

    fn thresholds(&self) -> Result<ThresholdPair> {
        match self {
            Rule::ExpFamily { family, mu, .. } => expfam_mixture_thresholds(&ExponentialFamilyKernel::new(*family)?, mu),
            Rule::Binomial { n, mu, direction, .. } => binomial_mixture_thresholds(*n, mu, *direction),
            Rule::PoissonBinomial { spec, direction, .. } => {
                let t = poisson_binomial_thresholds(spec);
                Ok(match direction {
                    PoissonBinomialDirection::SumVsBinomial => t.upward(),
                    PoissonBinomialDirection::BinomialVsSum => t.downward(),
                })
            }
            Rule::GammaConvolution { spec, .. } => Ok(gamma_convolution_thresholds(spec)),
            Rule::NegBinConvolution { spec, .. } => Ok(negbin_convolution_thresholds(spec)),
        }
    }

    /// Closed-form verdict for `relation`, if the rule decides it.
    fn entry(&self, relation: Relation, c: &CriterionResult, t: &ThresholdPair) -> Result<Option<CriterionEntry>> {
        let structural = |holds| CriterionEntry {
            holds,
            form: None,
            lhs: None,
            rhs: None,
            threshold: None,
        };
        Ok(match relation {
            Relation::St | Relation::Hr | Relation::Rh | Relation::Lr => {
                let (st_group, _) = c.orientation.groups();
                let ineq = if st_group.contains(&relation) { &c.st_hr } else { &c.lr_rh };
                Some(CriterionEntry {
                    holds: ineq.holds(),
                    form: Some(ineq.form),
                    lhs: Some(Num(ineq.lhs)),
                    rhs: Some(Num(ineq.rhs)),
                    threshold: t.threshold_for(relation).map(Num),
                })
            }
            // every forward rule pairs X with a law it is ≤lc to
            Relation::Lc => (c.orientation == Orientation::Forward).then(|| structural(true)),
            Relation::Disp => match self {
                Rule::GammaConvolution { spec, beta } => Some(CriterionEntry {
                    holds: gamma_disp_criterion(spec, *beta)?,
                    form: Some("β ≤ (Π βᵢ^αᵢ)^(1/α₊)"),
                    lhs: Some(Num(*beta)),
                    rhs: Some(Num(t.st_hr)),
                    threshold: Some(Num(t.st_hr)),
                }),
                _ => None,
            },
            Relation::Star => matches!(self, Rule::GammaConvolution { .. }).then(|| structural(true)),
        })
    }
}

fn run_oracle(
    relation: Relation,
    x: &Distribution,
    y: &Distribution,
    grid: &CheckGrid,
    opts: &CompareOptions,
) -> Result<OrderVerdict> {
    match relation {
        Relation::St => check_st(x, y, grid, opts.tol),
        Relation::Hr => check_hr(x, y, grid, opts.tol),
        Relation::Rh => check_rh(x, y, grid, opts.tol),
        Relation::Lr => check_lr(x, y, grid, opts.tol),
        Relation::Lc => check_lc(x, y, grid, opts.tol),
        Relation::Star => check_star(x, y, grid, opts.tol),
        Relation::Disp => check_disp(x, y, &default_quantile_levels(opts.quantile_levels), opts.tol),
    }
}

/// Decides `X ≤ Y` for each of `orders` (duplicates dropped, order kept).
pub fn compare(x: &DistSpec, y: &DistSpec, orders: &[Relation], opts: &CompareOptions) -> Result<ComparisonReport> {
    let mut wanted: Vec<Relation> = Vec::new();
    for &r in if orders.is_empty() { &DEFAULT_ORDERS[..] } else { orders } {
        if !wanted.contains(&r) {
            wanted.push(r);
        }
    }
    if x.is_discrete() != y.is_discrete() {
        return Err(Error::Incompatible(format!(
            "`{x}` and `{y}` do not share a support kind (one is discrete, the other continuous)"
        )));
    }
    if x.is_discrete() {
        if let Some(r) = wanted.iter().find(|r| r.continuous_only()) {
            return Err(Error::Incompatible(format!("the {r} order is defined for continuous distributions only")));
        }
    }
    let dx = x.build(opts.tail_tol)?;
    let dy = y.build(opts.tail_tol)?;
    let grid = CheckGrid::default_for(&dx, &dy, opts.grid_points)?;

    let rule = match_rule(x, y);
    let closed = match &rule {
        Some(r) => Some((r.criteria()?, r.thresholds()?)),
        None => None,
    };

    let mut entries = Vec::with_capacity(wanted.len());
    for &relation in &wanted {
        let verdict = run_oracle(relation, &dx, &dy, &grid, opts)?;
        let criterion = match (&rule, &closed) {
            (Some(r), Some((c, t))) => r.entry(relation, c, t)?,
            _ => None,
        };
        let discrepancy = criterion.as_ref().is_some_and(|c| c.holds != verdict.holds);
        entries.push(OrderEntry {
            relation,
            holds: verdict.holds,
            criterion,
            oracle: OracleEntry::from(&verdict),
            discrepancy,
        });
    }

    let rule_info = match (&rule, &closed) {
        (Some(r), Some((_, t))) => {
            let (parameter, value) = r.parameter();
            let (st_group, lr_group) = t.orientation.groups();
            Some(RuleInfo {
                name: r.name(),
                parameter,
                value: Num(value),
                orientation: t.orientation,
                direction: t.direction,
                st_group,
                st_threshold: Num(t.st_hr),
                lr_group,
                lr_threshold: Num(t.lr_rh),
            })
        }
        _ => None,
    };

    let all_hold = entries.iter().all(|e| e.holds);
    let discrepancy = entries.iter().any(|e| e.discrepancy);
    let exit_code = if discrepancy {
        exit::DISCREPANCY
    } else if all_hold {
        exit::HOLDS
    } else {
        exit::FAILS
    };
    Ok(ComparisonReport {
        tool: ToolInfo::current(),
        input: InputEcho {
            x: x.to_string(),
            y: y.to_string(),
            orders: wanted,
            tol: Num(opts.tol),
            grid_points: opts.grid_points,
            quantile_levels: opts.quantile_levels,
            tail_tol: Num(opts.tail_tol),
            seed: opts.seed,
        },
        rule: rule_info,
        grid: GridInfo::new(&grid, opts.quantile_levels),
        orders: entries,
        all_hold,
        discrepancy,
        exit_code,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdEntry {
    pub orders: [Relation; 2],
    /// The comparison the threshold refers to.
    pub comparison: String,
    pub parameter: &'static str,
    pub direction: Direction,
    pub threshold: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub tool: ToolInfo,
    pub input: String,
    pub thresholds: Vec<ThresholdEntry>,
}

impl ThresholdReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("orders,comparison,parameter,direction,threshold\n");
        for e in &self.thresholds {
            let _ = writeln!(
                out,
                "{}/{},\"{}\",{},{},{}",
                e.orders[0],
                e.orders[1],
                e.comparison,
                e.parameter,
                match e.direction {
                    Direction::AtMost => "at_most",
                    Direction::AtLeast => "at_least",
                },
                format_num(e.threshold.0)
            );
        }
        out
    }
}

fn pair_entries(t: &ThresholdPair, comparison: &str, parameter: &'static str) -> [ThresholdEntry; 2] {
    let (st_group, lr_group) = t.orientation.groups();
    [(st_group, t.st_hr), (lr_group, t.lr_rh)].map(|(orders, v)| ThresholdEntry {
        orders,
        comparison: comparison.to_owned(),
        parameter,
        direction: t.direction,
        threshold: Num(v),
    })
}

/// Parameter thresholds for a convolution or Poisson-binomial expression.
pub fn thresholds(spec: &DistSpec) -> Result<ThresholdReport> {
    let thresholds = match spec {
        DistSpec::GammaConvolution(s) => {
            let cmp = format!("gamma({}, beta) vs {spec}", s.total_shape());
            pair_entries(&gamma_convolution_thresholds(s), &cmp, "beta").to_vec()
        }
        DistSpec::NegBinConvolution(s) => {
            let cmp = format!("negbin({}, p) vs {spec}", s.total_size());
            pair_entries(&negbin_convolution_thresholds(s), &cmp, "p").to_vec()
        }
        DistSpec::PoissonBinomial(s) => {
            let t = poisson_binomial_thresholds(s);
            let n = s.len();
            let mut v = pair_entries(&t.upward(), &format!("{spec} vs binomial({n}, p)"), "p").to_vec();
            v.extend(pair_entries(&t.downward(), &format!("binomial({n}, p) vs {spec}"), "p"));
            v
        }
        other => {
            return Err(Error::Incompatible(format!(
                "thresholds are available for gconv, nbconv and pbin expressions, not {}",
                other.kind()
            )))
        }
    };
    Ok(ThresholdReport {
        tool: ToolInfo::current(),
        input: spec.to_string(),
        thresholds,
    })
}

/// Densities, distribution functions and hazards of a pair on one grid.
#[derive(Debug, Clone)]
pub struct CurveTable {
    pub rows: Vec<[f64; 10]>,
}

impl CurveTable {
    pub fn to_csv(&self) -> String {
        let mut out = CURVE_COLUMNS.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_num(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Column name to column values, in header order.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Columns(self)).expect("table serializes");
        s.push('\n');
        s
    }
}

struct Columns<'a>(&'a CurveTable);

impl Serialize for Columns<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(
            CURVE_COLUMNS
                .iter()
                .enumerate()
                .map(|(i, name)| (*name, self.0.rows.iter().map(|r| Num(r[i])).collect::<Vec<_>>())),
        )
    }
}

/// Evaluates both laws at `points`, or on the oracle's default grid.
pub fn curves(x: &DistSpec, y: &DistSpec, points: Option<&[f64]>, opts: &CompareOptions) -> Result<CurveTable> {
    if x.is_discrete() != y.is_discrete() {
        return Err(Error::Incompatible(format!("`{x}` and `{y}` do not share a support kind")));
    }
    let dx = x.build(opts.tail_tol)?;
    let dy = y.build(opts.tail_tol)?;
    let pts = match points {
        Some(p) => {
            // lattice points are validated as they are evaluated
            if dx.is_discrete() {
                p.to_vec()
            } else {
                CheckGrid::continuous(p.to_vec())?.points()
            }
        }
        None => CheckGrid::default_for(&dx, &dy, opts.grid_points)?.points(),
    };
    let rows = pts
        .into_iter()
        .map(|t| {
            let hazard = |d: &Distribution| d.hazard(t).unwrap_or(f64::NAN);
            Ok([
                t,
                dx.density(t)?,
                dy.density(t)?,
                dx.cdf(t)?,
                dy.cdf(t)?,
                dx.survival(t)?,
                dy.survival(t)?,
                hazard(&dx),
                hazard(&dy),
                dx.ln_density(t)? - dy.ln_density(t)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveTable { rows })
}
