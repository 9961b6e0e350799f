//! The (ε, δ) sampling driver.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::embed::{embed_clique_once, embed_cover_once, Symmetry};
use super::scaled::ScaledValue;
use super::substream;
use crate::analytic;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::prob::EdgeProb;

/// Multiplier applied to the analytic critical ratio of averages when it is
/// used as the default `rho`. It covers the gap between the ratio averaged
/// over `G(n,p)` and the per-graph critical ratio.
pub const RHO_SAFETY_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Cliques,
    IndependentSets,
    Covers,
}

impl Target {
    pub fn as_str(&self) -> &'static str {
        match self {
            Target::Cliques => "cliques",
            Target::IndependentSets => "independent-sets",
            Target::Covers => "covers",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cliques" => Ok(Target::Cliques),
            "independent-sets" => Ok(Target::IndependentSets),
            "covers" => Ok(Target::Covers),
            _ => Err(Error::InvalidArgument(format!(
                "unknown target {s:?} (expected cliques, independent-sets or covers)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleMode {
    /// Mean of `ceil(rho / (eps^2 delta))` samples (Chebyshev).
    #[default]
    FixedCount,
    /// Median of `ceil(8 ln(1/delta))` group means, each over
    /// `ceil(8 rho / eps^2)` samples.
    MedianOfMeans,
}

impl FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" | "fixed-count" => Ok(SampleMode::FixedCount),
            "mom" | "median-of-means" => Ok(SampleMode::MedianOfMeans),
            _ => Err(Error::InvalidArgument(format!(
                "unknown sample mode {s:?} (expected fixed-count or median-of-means)"
            ))),
        }
    }
}

impl fmt::Display for SampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleMode::FixedCount => "fixed-count",
            SampleMode::MedianOfMeans => "median-of-means",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// Critical-ratio bound. When unset, derived from `edge_probability`.
    pub rho: Option<f64>,
    pub mode: SampleMode,
    /// Accumulate exact rationals instead of logarithms.
    pub exact: bool,
    /// Edge probability of the model the input graph was drawn from.
    pub edge_probability: Option<EdgeProb>,
}

impl SampleConfig {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Config(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        Ok(SampleConfig {
            epsilon,
            delta,
            rho: None,
            mode: SampleMode::FixedCount,
            exact: false,
            edge_probability: None,
        })
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self> {
        if !(rho >= 1.0 && rho.is_finite()) {
            return Err(Error::Config(format!(
                "rho must be a finite value >= 1, got {rho}"
            )));
        }
        self.rho = Some(rho);
        Ok(self)
    }

    pub fn with_mode(mut self, mode: SampleMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn with_edge_probability(mut self, p: EdgeProb) -> Self {
        self.edge_probability = Some(p);
        self
    }

    /// The `rho` in force for a run: the explicit value, or the analytic
    /// critical ratio times [`RHO_SAFETY_FACTOR`].
    pub fn resolve_rho(&self, target: Target, k: usize, n: usize) -> Result<f64> {
        if let Some(rho) = self.rho {
            return Ok(rho);
        }
        let p = self.edge_probability.ok_or_else(|| {
            Error::Config("rho is unset and no edge probability is known to derive it".into())
        })?;
        analytic_rho(target, k, n, p)
    }
}

/// `RHO_SAFETY_FACTOR` times the analytic critical ratio of averages for the
/// given target on `G(n, p)`.
pub fn analytic_rho(target: Target, k: usize, n: usize, p: EdgeProb) -> Result<f64> {
    let crr = match target {
        Target::Cliques => analytic::crr_clique(k, n as u64, &p.to_rational()),
        Target::IndependentSets => analytic::crr_clique(k, n as u64, &p.complement().to_rational()),
        Target::Covers => analytic::crr_cover_total(k, n as u64, &p.to_rational()),
    }
    .map_err(|e| Error::Config(format!("cannot derive rho analytically: {e}")))?;
    let crr = crr
        .to_f64()
        .filter(|c| c.is_finite())
        .ok_or_else(|| Error::Config("analytic critical ratio does not fit in f64".into()))?;
    Ok(RHO_SAFETY_FACTOR * crr.max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplePlan {
    pub groups: u64,
    pub group_size: u64,
}

impl SamplePlan {
    pub fn total(&self) -> u64 {
        self.groups * self.group_size
    }
}

// Ceiling that ignores floating-point noise just above an integer, so that
// e.g. 10 / (0.1^2 * 0.05) gives 20000 rather than 20001.
fn ceil_count(x: f64) -> u64 {
    let r = x.round();
    let c = if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    };
    (c as u64).max(1)
}

pub fn required_samples(epsilon: f64, delta: f64, rho: f64, mode: SampleMode) -> SamplePlan {
    match mode {
        SampleMode::FixedCount => SamplePlan {
            groups: 1,
            group_size: ceil_count(rho / (epsilon * epsilon * delta)),
        },
        SampleMode::MedianOfMeans => SamplePlan {
            groups: ceil_count(8.0 * (1.0 / delta).ln()),
            group_size: ceil_count(8.0 * rho / (epsilon * epsilon)),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub target: Target,
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub rho: f64,
    pub plan: SamplePlan,
    pub estimate: ScaledValue,
    pub samples: u64,
    pub zero_outputs: u64,
    /// Mean of the squared sample values.
    pub second_moment: ScaledValue,
    /// Mean of squares over square of mean; `None` when every sample is 0.
    pub critical_ratio: Option<f64>,
    /// Interval at level `1 - delta` from the empirical variance; `None`
    /// with fewer than two samples.
    pub interval: Option<(ScaledValue, ScaledValue)>,
}

fn check_target(g: &Graph, k: usize, target: Target) -> Result<()> {
    if k == 0 {
        return Err(Error::Config("k must be positive".into()));
    }
    if target == Target::Covers && !g.n().is_multiple_of(k) {
        return Err(Error::Config(format!(
            "clique covers need k to divide n (n = {}, k = {k})",
            g.n()
        )));
    }
    Ok(())
}

/// Sample values `first..first+count` of the estimator for `target`, each
/// drawn from its own substream of `seed`. Independent-set samples are the
/// clique samples of the complement graph.
pub fn draw_samples(
    g: &Graph,
    k: usize,
    target: Target,
    seed: u64,
    first: u64,
    count: u64,
    exact: bool,
) -> Result<Vec<ScaledValue>> {
    check_target(g, k, target)?;
    let complement;
    let graph = if target == Target::IndependentSets {
        complement = g.complement();
        &complement
    } else {
        g
    };
    let symmetry = match target {
        Target::Covers => Symmetry::cover(g.n(), k),
        _ => Symmetry::clique(k),
    };
    Ok((first..first + count)
        .into_par_iter()
        .map(|i| {
            let mut chooser = substream(seed, i);
            let trace = match target {
                Target::Covers => embed_cover_once(graph, k, &mut chooser).expect("k divides n"),
                _ => embed_clique_once(graph, k, &mut chooser),
            };
            trace.estimate(&symmetry, exact)
        })
        .collect())
}

/// Runs the estimator for `target` on `g` to relative accuracy `epsilon`
/// with failure probability `delta`.
pub fn estimate(
    g: &Graph,
    k: usize,
    target: Target,
    cfg: &SampleConfig,
    seed: u64,
) -> Result<EstimateReport> {
    check_target(g, k, target)?;
    let rho = cfg.resolve_rho(target, k, g.n())?;
    let plan = required_samples(cfg.epsilon, cfg.delta, rho, cfg.mode);
    let values = draw_samples(g, k, target, seed, 0, plan.total(), cfg.exact)?;

    let zero_outputs = values.iter().filter(|v| v.is_zero()).count() as u64;
    let mean = ScaledValue::mean(&values);
    let squares: Vec<ScaledValue> = values.iter().map(ScaledValue::square).collect();
    let second_moment = ScaledValue::mean(&squares);
    let critical_ratio = empirical_critical_ratio(&values);

    let (point, interval) = match cfg.mode {
        SampleMode::FixedCount => {
            let t = plan.total() as f64;
            let interval = relative_variance(critical_ratio, plan.total())
                .map(|rv| around(&mean, (rv / (t * cfg.delta)).sqrt()));
            (mean, interval)
        }
        SampleMode::MedianOfMeans => {
            let b = plan.group_size as usize;
            let mut groups: Vec<ScaledValue> = values.chunks(b).map(ScaledValue::mean).collect();
            groups.sort_by(ScaledValue::cmp_value);
            let g = groups.len();
            let median = if g % 2 == 1 {
                groups[g / 2].clone()
            } else {
                ScaledValue::mean(&groups[g / 2 - 1..=g / 2])
            };
            // Each group mean is within 2 s / sqrt(b) of the truth with
            // probability >= 3/4; the median inherits it with probability
            // >= 1 - delta for this many groups.
            let interval = relative_variance(critical_ratio, plan.total()).map(|rv| {
                let half = ScaledValue::from_ln(mean.ln() + (4.0 * rv / b as f64).sqrt().ln());
                around_abs(&median, &half)
            });
            (median, interval)
        }
    };

    Ok(EstimateReport {
        target,
        k,
        n: g.n(),
        seed,
        rho,
        plan,
        estimate: point,
        samples: plan.total(),
        zero_outputs,
        second_moment,
        critical_ratio,
        interval,
    })
}

/// `mean(x^2) / mean(x)^2`, computed on values rescaled by their maximum.
fn empirical_critical_ratio(values: &[ScaledValue]) -> Option<f64> {
    if values.iter().all(ScaledValue::is_exact) {
        let rats: Vec<_> = values.iter().map(|v| v.to_rational().unwrap()).collect();
        let s1: num_rational::BigRational = rats.iter().sum();
        if s1 == num_rational::BigRational::default() {
            return None;
        }
        let s2: num_rational::BigRational = rats.iter().map(|r| r * r).sum();
        let t = num_rational::BigRational::from_integer((values.len() as u64).into());
        return (s2 * t / (&s1 * &s1)).to_f64();
    }
    let top = values
        .iter()
        .map(ScaledValue::ln)
        .fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return None;
    }
    let scaled: Vec<f64> = values.iter().map(|v| (v.ln() - top).exp()).collect();
    let s1: f64 = scaled.iter().sum();
    let s2: f64 = scaled.iter().map(|y| y * y).sum();
    Some(s2 * values.len() as f64 / (s1 * s1))
}

/// Unbiased sample variance divided by the squared mean.
fn relative_variance(critical_ratio: Option<f64>, samples: u64) -> Option<f64> {
    if samples < 2 {
        return None;
    }
    let t = samples as f64;
    Some(critical_ratio.map_or(0.0, |c| ((c - 1.0) * t / (t - 1.0)).max(0.0)))
}

fn around(center: &ScaledValue, rel_half_width: f64) -> (ScaledValue, ScaledValue) {
    if center.is_zero() || rel_half_width == 0.0 {
        return (center.clone(), center.clone());
    }
    let lo = if rel_half_width >= 1.0 {
        ScaledValue::Zero
    } else {
        ScaledValue::from_ln(center.ln() + (1.0 - rel_half_width).ln())
    };
    let hi = ScaledValue::from_ln(center.ln() + rel_half_width.ln_1p());
    (lo, hi)
}

fn around_abs(center: &ScaledValue, half: &ScaledValue) -> (ScaledValue, ScaledValue) {
    if half.is_zero() {
        return (center.clone(), center.clone());
    }
    if center.is_zero() {
        return (ScaledValue::Zero, half.clone());
    }
    around(center, (half.ln() - center.ln()).exp())
}
