//! Closed-form decision rules for comparing a family member with a mixture
//! of the same family, a binomial with a Poisson-binomial, and a gamma or
//! negative binomial with a convolution of its kind.
//!
//! Every rule rests on relative log-concavity: when `l = ln(f/g)` is concave
//! the four orders are decided by `l` near the left end of the support. The
//! usual and hazard-rate orders then hinge on `l(0+) ≥ 0` and the likelihood
//! ratio and reversed hazard orders on `l′(0+) ≤ 0`; for lattice laws the
//! conditions read `f(0)/g(0) ≥ 1` and `f(1)/g(1) ≤ f(0)/g(0)`.
//!
//! Sums over `μ` that may underflow are evaluated in log space, so several
//! inequalities are stored as logarithms of the textbook forms; the
//! [`Inequality::form`] string names the form actually compared.

use serde::Serialize;

use crate::dist::{
    Distribution, Family, FiniteMixingMeasure, GammaConvolutionSpec, NegBinConvolutionSpec, PoissonBinomialSpec,
};
use crate::error::{domain, Error, Result};
use crate::oracle::Relation;
use crate::specfn::log_sum_exp;

/// How the two distributions of a rule are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// The log-concave-relative law is on the left: `X ≤ Y` with
    /// `X ≤lc Y`. ≤st goes with ≤hr, ≤lr with ≤rh.
    Forward,
    /// Obtained from `Forward` through `x ↦ n − x`: the comparison is
    /// `Y ≤ X`, and ≤st goes with ≤rh, ≤lr with ≤hr.
    Reversed,
}

impl Orientation {
    /// The relations decided by the survival-type and density-type rules.
    pub fn groups(self) -> ([Relation; 2], [Relation; 2]) {
        match self {
            Orientation::Forward => ([Relation::St, Relation::Hr], [Relation::Lr, Relation::Rh]),
            Orientation::Reversed => ([Relation::St, Relation::Rh], [Relation::Lr, Relation::Hr]),
        }
    }
}

/// Which side of a threshold the free parameter must lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AtMost,
    AtLeast,
}

impl Direction {
    pub fn admits(self, param: f64, threshold: f64) -> bool {
        match self {
            Direction::AtMost => param <= threshold,
            Direction::AtLeast => param >= threshold,
        }
    }
}

/// Parameter thresholds of a rule; equality satisfies the order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdPair {
    /// Threshold of the group containing ≤st.
    pub st_hr: f64,
    /// Threshold of the group containing ≤lr.
    pub lr_rh: f64,
    pub direction: Direction,
    pub orientation: Orientation,
}

impl ThresholdPair {
    pub fn threshold_for(&self, relation: Relation) -> Option<f64> {
        let (st_group, lr_group) = self.orientation.groups();
        if st_group.contains(&relation) {
            Some(self.st_hr)
        } else if lr_group.contains(&relation) {
            Some(self.lr_rh)
        } else {
            None
        }
    }

    /// Verdicts `(st group, lr group)` at parameter value `param`.
    pub fn decide(&self, param: f64) -> (bool, bool) {
        (self.direction.admits(param, self.st_hr), self.direction.admits(param, self.lr_rh))
    }
}

/// Relative rounding allowance of [`Inequality::holds`].
pub const EQUALITY_SLACK: f64 = 1e-12;

/// `lhs ≤ rhs`, as evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub form: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    fn new(form: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { form, lhs, rhs }
    }

    /// Non-strict, with `EQUALITY_SLACK` relative room so that values equal
    /// up to rounding count as equal.
    pub fn holds(&self) -> bool {
        let scale = self.lhs.abs().max(self.rhs.abs()).max(1.0);
        self.lhs <= self.rhs + EQUALITY_SLACK * scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    /// Decides the group containing ≤st.
    pub st_hr: Inequality,
    /// Decides the group containing ≤lr.
    pub lr_rh: Inequality,
    pub orientation: Orientation,
}

impl CriterionResult {
    pub fn st_hr_holds(&self) -> bool {
        self.st_hr.holds()
    }

    pub fn lr_rh_holds(&self) -> bool {
        self.lr_rh.holds()
    }

    /// Verdict for one of st, hr, rh, lr; `None` for the others.
    pub fn verdict(&self, relation: Relation) -> Option<bool> {
        let (st_group, lr_group) = self.orientation.groups();
        if st_group.contains(&relation) {
            Some(self.st_hr_holds())
        } else if lr_group.contains(&relation) {
            Some(self.lr_rh_holds())
        } else {
            None
        }
    }
}

/// Support of an exponential-family kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    Lattice,
    PositiveReals,
}

/// `f(x; θ) = f₀(x) exp[b(θ) x] h(θ)` for one of the four families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialFamilyKernel {
    family: Family,
}

impl ExponentialFamilyKernel {
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        Ok(Self { family })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn support(&self) -> SupportKind {
        if self.family.is_discrete() {
            SupportKind::Lattice
        } else {
            SupportKind::PositiveReals
        }
    }

    /// Poisson `ln λ`, binomial `ln(p/(1−p))`, negative binomial `ln(1−p)`,
    /// gamma `−1/β`.
    pub fn b(&self, t: f64) -> f64 {
        match self.family {
            Family::Poisson => t.ln(),
            Family::Binomial { .. } => t.ln() - (-t).ln_1p(),
            Family::NegBin { .. } => (-t).ln_1p(),
            Family::Gamma { .. } => -1.0 / t,
        }
    }

    /// `ln h`: Poisson `−λ`, binomial `n ln(1−p)`, negative binomial
    /// `k ln p`, gamma `−α ln β`.
    pub fn ln_h(&self, t: f64) -> f64 {
        match self.family {
            Family::Poisson => -t,
            Family::Binomial { n } => n as f64 * (-t).ln_1p(),
            Family::NegBin { k } => k * t.ln(),
            Family::Gamma { alpha } => -alpha * t.ln(),
        }
    }

    pub fn h(&self, t: f64) -> f64 {
        self.ln_h(t).exp()
    }

    fn check(&self, theta: f64, mu: &FiniteMixingMeasure) -> Result<()> {
        self.family.validate_param(theta)?;
        mu.validate_for(&self.family)
    }
}

/// `ln ∫ e^{φ(t)} dμ(t)`.
fn ln_integral(mu: &FiniteMixingMeasure, ln_phi: impl Fn(f64) -> f64) -> f64 {
    let terms: Vec<f64> = mu.atoms().iter().map(|&(t, w)| w.ln() + ln_phi(t)).collect();
    log_sum_exp(&terms).expect("finite mixture terms")
}

/// `∫ ψ e^{φ} dμ / ∫ e^{φ} dμ`, with the weights normalized in log space.
fn tilted_mean(mu: &FiniteMixingMeasure, ln_phi: impl Fn(f64) -> f64, psi: impl Fn(f64) -> f64) -> f64 {
    let logs: Vec<f64> = mu.atoms().iter().map(|&(t, w)| w.ln() + ln_phi(t)).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for (&(t, _), l) in mu.atoms().iter().zip(&logs) {
        let e = (l - max).exp();
        num += e * psi(t);
        den += e;
    }
    num / den
}

/// `∫ h dμ ≤ h(θ)`, compared as `ln ∫ h dμ ≤ ln h(θ)`.
pub fn expfam_mixture_st_criterion(
    kernel: &ExponentialFamilyKernel,
    theta: f64,
    mu: &FiniteMixingMeasure,
) -> Result<Inequality> {
    kernel.check(theta, mu)?;
    Ok(Inequality::new(
        "ln ∫ h dμ ≤ ln h(θ)",
        ln_integral(mu, |t| kernel.ln_h(t)),
        kernel.ln_h(theta),
    ))
}

/// Continuous kernels: `b(θ) ≤ ∫ b h dμ / ∫ h dμ`; lattice kernels:
/// `e^{b(θ)} ≤ ∫ h e^b dμ / ∫ h dμ`.
pub fn expfam_mixture_lr_criterion(
    kernel: &ExponentialFamilyKernel,
    theta: f64,
    mu: &FiniteMixingMeasure,
) -> Result<Inequality> {
    kernel.check(theta, mu)?;
    let ln_h = |t: f64| kernel.ln_h(t);
    Ok(match kernel.support() {
        SupportKind::PositiveReals => Inequality::new(
            "b(θ) ≤ ∫ b h dμ / ∫ h dμ",
            kernel.b(theta),
            tilted_mean(mu, ln_h, |t| kernel.b(t)),
        ),
        SupportKind::Lattice => Inequality::new(
            "exp b(θ) ≤ ∫ h e^b dμ / ∫ h dμ",
            kernel.b(theta).exp(),
            tilted_mean(mu, ln_h, |t| kernel.b(t).exp()),
        ),
    })
}

/// Both generic rules for `f(·; θ)` against `∫ f(·; t) dμ(t)`.
pub fn expfam_mixture_criteria(
    kernel: &ExponentialFamilyKernel,
    theta: f64,
    mu: &FiniteMixingMeasure,
) -> Result<CriterionResult> {
    Ok(CriterionResult {
        st_hr: expfam_mixture_st_criterion(kernel, theta, mu)?,
        lr_rh: expfam_mixture_lr_criterion(kernel, theta, mu)?,
        orientation: Orientation::Forward,
    })
}

/// Parameter values at which the generic rules hold with equality, for the
/// forward comparison `f(·; θ)` against the mixture.
pub fn expfam_mixture_thresholds(kernel: &ExponentialFamilyKernel, mu: &FiniteMixingMeasure) -> Result<ThresholdPair> {
    mu.validate_for(&kernel.family())?;
    let ln_int = ln_integral(mu, |t| kernel.ln_h(t));
    let ln_h = |t: f64| kernel.ln_h(t);
    let (st_hr, lr_rh, direction) = match kernel.family() {
        // −ln ∫ e^{−t} dμ; tilted mean of t
        Family::Poisson => (-ln_int, tilted_mean(mu, ln_h, |t| t), Direction::AtMost),
        Family::Binomial { n } => {
            let n = n as f64;
            let st = -(ln_int / n).exp_m1();
            // p/(1−p) ≤ r  ⟺  p ≤ r/(1+r)
            let r = tilted_mean(mu, ln_h, |t| t / (1.0 - t));
            (st, r / (1.0 + r), Direction::AtMost)
        }
        Family::NegBin { k } => {
            let st = (ln_int / k).exp();
            // 1 − p ≤ r  ⟺  p ≥ 1 − r
            let r = tilted_mean(mu, ln_h, |t| 1.0 - t);
            (st, 1.0 - r, Direction::AtLeast)
        }
        Family::Gamma { alpha } => {
            let st = (-ln_int / alpha).exp();
            // −1/β ≤ m  ⟺  β ≤ −1/m
            let m = tilted_mean(mu, ln_h, |t| -1.0 / t);
            (st, -1.0 / m, Direction::AtMost)
        }
    };
    Ok(ThresholdPair {
        st_hr,
        lr_rh,
        direction,
        orientation: Orientation::Forward,
    })
}

/// Which way a binomial is compared with a binomial mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinomialDirection {
    /// `Bin(n, p)` against the mixture.
    PlainVsMixture,
    /// The mixture against `Bin(n, p)`.
    MixtureVsPlain,
}

fn check_prob(p: f64, what: &str) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{what} must lie in (0, 1), got {p}")))
    }
}

/// Binomial rules in the family's own variables.
///
/// Plain vs mixture: `Σ w(1−t)ⁿ ≤ (1−p)ⁿ` for st/hr and
/// `p ≤ Σ w t(1−t)^{n−1} / Σ w (1−t)^{n−1}` for lr/rh.
/// Mixture vs plain: `Σ w tⁿ ≤ pⁿ` for st/rh and
/// `Σ w tⁿ / Σ w t^{n−1} ≤ p` for lr/hr.
pub fn binomial_mixture_criteria(
    n: u64,
    p: f64,
    mu: &FiniteMixingMeasure,
    direction: BinomialDirection,
) -> Result<CriterionResult> {
    let family = Family::Binomial { n };
    check_prob(p, "binomial probability")?;
    mu.validate_for(&family)?;
    let nf = n as f64;
    Ok(match direction {
        BinomialDirection::PlainVsMixture => CriterionResult {
            st_hr: Inequality::new(
                "ln Σ w (1−t)^n ≤ n ln(1−p)",
                ln_integral(mu, |t| nf * (-t).ln_1p()),
                nf * (-p).ln_1p(),
            ),
            lr_rh: Inequality::new(
                "p ≤ Σ w t (1−t)^(n−1) / Σ w (1−t)^(n−1)",
                p,
                tilted_mean(mu, |t| (nf - 1.0) * (-t).ln_1p(), |t| t),
            ),
            orientation: Orientation::Forward,
        },
        BinomialDirection::MixtureVsPlain => CriterionResult {
            st_hr: Inequality::new("ln Σ w t^n ≤ n ln p", ln_integral(mu, |t| nf * t.ln()), nf * p.ln()),
            lr_rh: Inequality::new(
                "Σ w t^n / Σ w t^(n−1) ≤ p",
                tilted_mean(mu, |t| (nf - 1.0) * t.ln(), |t| t),
                p,
            ),
            orientation: Orientation::Reversed,
        },
    })
}

/// Thresholds on p for [`binomial_mixture_criteria`].
pub fn binomial_mixture_thresholds(
    n: u64,
    mu: &FiniteMixingMeasure,
    direction: BinomialDirection,
) -> Result<ThresholdPair> {
    let family = Family::Binomial { n };
    mu.validate_for(&family)?;
    let nf = n as f64;
    Ok(match direction {
        BinomialDirection::PlainVsMixture => ThresholdPair {
            st_hr: -(ln_integral(mu, |t| nf * (-t).ln_1p()) / nf).exp_m1(),
            lr_rh: tilted_mean(mu, |t| (nf - 1.0) * (-t).ln_1p(), |t| t),
            direction: Direction::AtMost,
            orientation: Orientation::Forward,
        },
        BinomialDirection::MixtureVsPlain => ThresholdPair {
            st_hr: (ln_integral(mu, |t| nf * t.ln()) / nf).exp(),
            lr_rh: tilted_mean(mu, |t| (nf - 1.0) * t.ln(), |t| t),
            direction: Direction::AtLeast,
            orientation: Orientation::Reversed,
        },
    })
}

/// `NB(k, p)` against the NB(k, ·) mixture: `Σ w t^k ≤ p^k` for st/hr and
/// `Σ w t^{k+1} / Σ w t^k ≤ p` for lr/rh.
pub fn negbin_mixture_criteria(k: f64, p: f64, mu: &FiniteMixingMeasure) -> Result<CriterionResult> {
    let family = Family::NegBin { k };
    family.validate()?;
    check_prob(p, "negative-binomial probability")?;
    mu.validate_for(&family)?;
    Ok(CriterionResult {
        st_hr: Inequality::new("ln Σ w t^k ≤ k ln p", ln_integral(mu, |t| k * t.ln()), k * p.ln()),
        lr_rh: Inequality::new("Σ w t^(k+1) / Σ w t^k ≤ p", tilted_mean(mu, |t| k * t.ln(), |t| t), p),
        orientation: Orientation::Forward,
    })
}

/// `Gam(α, β)` against the Gam(α, ·) scale mixture:
/// `Σ w t^{−α} ≤ β^{−α}` for st/hr and `β Σ w t^{−α−1} ≤ Σ w t^{−α}`,
/// i.e. `β ≤ Σ w t^{−α} / Σ w t^{−α−1}`, for lr/rh.
pub fn gamma_mixture_criteria(alpha: f64, beta: f64, mu: &FiniteMixingMeasure) -> Result<CriterionResult> {
    let family = Family::Gamma { alpha };
    family.validate()?;
    family.validate_param(beta)?;
    mu.validate_for(&family)?;
    Ok(CriterionResult {
        st_hr: Inequality::new(
            "ln Σ w t^(−α) ≤ −α ln β",
            ln_integral(mu, |t| -alpha * t.ln()),
            -alpha * beta.ln(),
        ),
        lr_rh: Inequality::new(
            "β ≤ Σ w t^(−α) / Σ w t^(−α−1)",
            beta,
            1.0 / tilted_mean(mu, |t| -alpha * t.ln(), |t| 1.0 / t),
        ),
        orientation: Orientation::Forward,
    })
}

/// Thresholds on p for a Poisson-binomial `X = Σ Bᵢ` against `Bin(n, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonBinomialThresholds {
    /// `X ≤st Y` and `X ≤hr Y` iff `p ≥ 1 − (Π(1−pᵢ))^{1/n}`.
    pub st_up: f64,
    /// `X ≤lr Y` and `X ≤rh Y` iff `p ≥ 1 − n / Σ(1−pᵢ)^{−1}`.
    pub lr_up: f64,
    /// `Y ≤st X` and `Y ≤rh X` iff `p ≤ (Π pᵢ)^{1/n}`.
    pub st_down: f64,
    /// `Y ≤lr X` and `Y ≤hr X` iff `p ≤ n / Σ pᵢ^{−1}`.
    pub lr_down: f64,
}

impl PoissonBinomialThresholds {
    /// Rules for the Poisson-binomial on the left.
    pub fn upward(&self) -> ThresholdPair {
        ThresholdPair {
            st_hr: self.st_up,
            lr_rh: self.lr_up,
            direction: Direction::AtLeast,
            orientation: Orientation::Forward,
        }
    }

    /// Rules for the binomial on the left.
    pub fn downward(&self) -> ThresholdPair {
        ThresholdPair {
            st_hr: self.st_down,
            lr_rh: self.lr_down,
            direction: Direction::AtMost,
            orientation: Orientation::Reversed,
        }
    }
}

pub fn poisson_binomial_thresholds(spec: &PoissonBinomialSpec) -> PoissonBinomialThresholds {
    let n = spec.len() as f64;
    let probs = spec.probs();
    let mean_ln_q: f64 = probs.iter().map(|p| (-p).ln_1p()).sum::<f64>() / n;
    let mean_ln_p: f64 = probs.iter().map(|p| p.ln()).sum::<f64>() / n;
    let inv_q: f64 = probs.iter().map(|p| 1.0 / (1.0 - p)).sum();
    let inv_p: f64 = probs.iter().map(|p| 1.0 / p).sum();
    PoissonBinomialThresholds {
        st_up: -mean_ln_q.exp_m1(),
        lr_up: 1.0 - n / inv_q,
        st_down: mean_ln_p.exp(),
        lr_down: n / inv_p,
    }
}

/// Which way a Poisson-binomial is compared with a binomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoissonBinomialDirection {
    /// Poisson-binomial on the left.
    SumVsBinomial,
    /// Binomial on the left.
    BinomialVsSum,
}

/// The Poisson-binomial rules at `p`, stored as threshold comparisons.
pub fn poisson_binomial_criteria(
    spec: &PoissonBinomialSpec,
    p: f64,
    direction: PoissonBinomialDirection,
) -> Result<CriterionResult> {
    check_prob(p, "binomial probability")?;
    let t = poisson_binomial_thresholds(spec);
    Ok(match direction {
        PoissonBinomialDirection::SumVsBinomial => CriterionResult {
            st_hr: Inequality::new("1 − (Π(1−pᵢ))^(1/n) ≤ p", t.st_up, p),
            lr_rh: Inequality::new("1 − n / Σ(1−pᵢ)^(−1) ≤ p", t.lr_up, p),
            orientation: Orientation::Forward,
        },
        PoissonBinomialDirection::BinomialVsSum => CriterionResult {
            st_hr: Inequality::new("p ≤ (Π pᵢ)^(1/n)", p, t.st_down),
            lr_rh: Inequality::new("p ≤ n / Σ pᵢ^(−1)", p, t.lr_down),
            orientation: Orientation::Reversed,
        },
    })
}

/// For `T ~ Gam(α₊, β)` against `S = Σ βᵢ Sᵢ`: st/hr iff
/// `β ≤ (Π βᵢ^{αᵢ})^{1/α₊}`, lr/rh iff `β ≤ α₊ / Σ(αᵢ/βᵢ)`.
pub fn gamma_convolution_thresholds(spec: &GammaConvolutionSpec) -> ThresholdPair {
    let total = spec.total_shape();
    let ln_geo: f64 = spec.components().map(|(a, b)| a * b.ln()).sum::<f64>() / total;
    let inv: f64 = spec.components().map(|(a, b)| a / b).sum();
    ThresholdPair {
        st_hr: ln_geo.exp(),
        lr_rh: total / inv,
        direction: Direction::AtMost,
        orientation: Orientation::Forward,
    }
}

/// For `M ~ NB(k₊, p)` against `N = Σ Nᵢ`: st/hr iff
/// `p ≥ (Π pᵢ^{kᵢ})^{1/k₊}`, lr/rh iff `p ≥ Σ kᵢ pᵢ / k₊`.
pub fn negbin_convolution_thresholds(spec: &NegBinConvolutionSpec) -> ThresholdPair {
    let total = spec.total_size();
    let ln_geo: f64 = spec.components().map(|(k, p)| k * p.ln()).sum::<f64>() / total;
    let mean: f64 = spec.components().map(|(k, p)| k * p).sum::<f64>() / total;
    ThresholdPair {
        st_hr: ln_geo.exp(),
        lr_rh: mean,
        direction: Direction::AtLeast,
        orientation: Orientation::Forward,
    }
}

/// Order of a negative moment of `S/T₀`, `T₀ = Σ Sᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentOrder {
    /// `E[(S/T₀)^{−α₊}] = Π βᵢ^{−αᵢ}`.
    AlphaPlus,
    /// `E[(S/T₀)^{−α₊−1}] = (Σ αᵢ/βᵢ / α₊) Π βᵢ^{−αᵢ}`.
    AlphaPlusPlusOne,
}

/// Negative moments of `S/T₀ = Σ βᵢ Dᵢ` with `D ~ Dirichlet(α)`.
pub fn dirichlet_negative_moment(spec: &GammaConvolutionSpec, order: MomentOrder) -> f64 {
    let base = (-spec.components().map(|(a, b)| a * b.ln()).sum::<f64>()).exp();
    match order {
        MomentOrder::AlphaPlus => base,
        MomentOrder::AlphaPlusPlusOne => {
            let inv: f64 = spec.components().map(|(a, b)| a / b).sum();
            inv / spec.total_shape() * base
        }
    }
}

/// The gamma-mixture rules applied to `S`, whose mixing law is that of
/// `S/T₀`, using the two negative moments.
pub fn gamma_convolution_criteria(spec: &GammaConvolutionSpec, beta: f64) -> Result<CriterionResult> {
    Family::Gamma { alpha: 1.0 }.validate_param(beta)?;
    let total = spec.total_shape();
    let m0 = dirichlet_negative_moment(spec, MomentOrder::AlphaPlus);
    let m1 = dirichlet_negative_moment(spec, MomentOrder::AlphaPlusPlusOne);
    Ok(CriterionResult {
        st_hr: Inequality::new("ln E[(S/T₀)^(−α₊)] ≤ −α₊ ln β", m0.ln(), -total * beta.ln()),
        lr_rh: Inequality::new("β E[(S/T₀)^(−α₊−1)] ≤ E[(S/T₀)^(−α₊)]", beta * m1, m0),
        orientation: Orientation::Forward,
    })
}

/// The lattice boundary rules for `M ~ NB(k₊, p)` against `N`:
/// `P(M=0)/P(N=0) ≥ 1` and `P(M=1)/P(N=1) ≤ P(M=0)/P(N=0)`.
pub fn negbin_convolution_criteria(spec: &NegBinConvolutionSpec, p: f64) -> Result<CriterionResult> {
    check_prob(p, "negative-binomial probability")?;
    let total = spec.total_size();
    let ln_ratio0 = total * p.ln() - spec.components().map(|(k, q)| k * q.ln()).sum::<f64>();
    let weighted: f64 = spec.components().map(|(k, q)| k * (1.0 - q)).sum();
    Ok(CriterionResult {
        st_hr: Inequality::new("0 ≤ ln(P(M=0)/P(N=0))", 0.0, ln_ratio0),
        lr_rh: Inequality::new("k₊(1−p) ≤ Σ kᵢ(1−pᵢ)", total * (1.0 - p), weighted),
        orientation: Orientation::Forward,
    })
}

/// Dispersive comparison of `Gam(α₊, β)` with `S`; it coincides with the
/// usual stochastic order.
pub fn gamma_disp_criterion(spec: &GammaConvolutionSpec, beta: f64) -> Result<bool> {
    Family::Gamma { alpha: 1.0 }.validate_param(beta)?;
    Ok(beta <= gamma_convolution_thresholds(spec).st_hr)
}

/// Largest dyadic exponent: the sequence uses `x = 2^{−j}`, `j = 10..=40`.
const DYADIC_FIRST: i32 = 10;
const DYADIC_LAST: i32 = 40;
const RICHARDSON_TOL: f64 = 1e-8;
const RICHARDSON_MAX_ORDER: usize = 8;

/// Behaviour of `l = ln(f/g)` at the left end of the support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryConditions {
    Continuous {
        l_limit_at_0: f64,
        l_slope_limit_at_0: f64,
    },
    Discrete {
        ratio0: f64,
        ratio1: f64,
        ratio1_le_ratio0: bool,
    },
}

impl BoundaryConditions {
    /// `l(0+) ≥ 0`, or `f(0)/g(0) ≥ 1`.
    pub fn st_hr_holds(&self) -> bool {
        match *self {
            BoundaryConditions::Continuous { l_limit_at_0, .. } => l_limit_at_0 >= 0.0,
            BoundaryConditions::Discrete { ratio0, .. } => ratio0 >= 1.0,
        }
    }

    /// `l′(0+) ≤ 0`, or `f(1)/g(1) ≤ f(0)/g(0)`.
    pub fn lr_rh_holds(&self) -> bool {
        match *self {
            BoundaryConditions::Continuous { l_slope_limit_at_0, .. } => l_slope_limit_at_0 <= 0.0,
            BoundaryConditions::Discrete { ratio1_le_ratio0, .. } => ratio1_le_ratio0,
        }
    }
}

/// Limit of a sequence whose error is a power series in `h_j = 2^{−j} h₀`,
/// by Richardson extrapolation with ratio 2. Stops when two successive
/// estimates agree within `RICHARDSON_TOL · max(1, |estimate|)`.
fn richardson_limit(seq: impl Iterator<Item = f64>, what: &str) -> Result<f64> {
    let mut prev_row: Vec<f64> = Vec::new();
    let mut best: Option<(f64, f64)> = None;
    for s in seq {
        if !s.is_finite() {
            return Err(Error::NonConvergence(format!("{what}: sequence value {s}")));
        }
        let mut row = vec![s];
        for k in 1..=prev_row.len().min(RICHARDSON_MAX_ORDER) {
            let factor = f64::powi(2.0, k as i32) - 1.0;
            let next = row[k - 1] + (row[k - 1] - prev_row[k - 1]) / factor;
            row.push(next);
        }
        if row.len() >= 2 {
            let k = row.len() - 1;
            let err = (row[k] - row[k - 1]).abs();
            if best.is_none_or(|(_, e)| err < e) {
                best = Some((row[k], err));
            }
            if err <= RICHARDSON_TOL * row[k].abs().max(1.0) {
                return Ok(row[k]);
            }
        }
        prev_row = row;
    }
    let detail = best.map_or(String::new(), |(v, e)| format!(" (best {v} with change {e:e})"));
    Err(Error::NonConvergence(format!("{what}: dyadic sequence did not settle{detail}")))
}

/// Limits of `l` and `l′` at 0 for continuous pairs; pmf ratios at 0 and 1
/// for lattice pairs. Meaningful when `X ≤lc Y`.
pub fn boundary_conditions(x: &Distribution, y: &Distribution) -> Result<BoundaryConditions> {
    match (x, y) {
        (Distribution::Discrete(a), Distribution::Discrete(b)) => {
            let ratio = |k: u64| -> Result<f64> {
                let (f, g) = (a.pmf(k), b.pmf(k));
                if !(g > 0.0) {
                    return Err(domain(format!("pmf of Y vanishes at {k}")));
                }
                Ok(f / g)
            };
            let (ratio0, ratio1) = (ratio(0)?, ratio(1)?);
            Ok(BoundaryConditions::Discrete {
                ratio0,
                ratio1,
                ratio1_le_ratio0: ratio1 <= ratio0,
            })
        }
        (Distribution::Continuous(a), Distribution::Continuous(b)) => {
            let l = |t: f64| a.ln_pdf(t) - b.ln_pdf(t);
            let xs = || (DYADIC_FIRST..=DYADIC_LAST).map(|j| f64::powi(2.0, -j));
            let l_limit = richardson_limit(xs().map(l), "limit of l at 0")?;
            let slope = richardson_limit(xs().map(|t| (l(2.0 * t) - l(t)) / t), "limit of l′ at 0")?;
            Ok(BoundaryConditions::Continuous {
                l_limit_at_0: l_limit,
                l_slope_limit_at_0: slope,
            })
        }
        _ => Err(Error::Incompatible(
            "cannot compare a discrete with a continuous distribution".into(),
        )),
    }
}
