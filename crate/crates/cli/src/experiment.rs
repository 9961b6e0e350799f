//! Parameter-grid experiments driven by a flat `key = value` spec file or a
//! built-in preset.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use rgcount::analytic;
use rgcount::estimators::{embed_clique_once, substream, SampleConfig, SampleMode, Target};
use rgcount::graph::{generate_gnp, GenSpec};
use rgcount::oracles::binomial_moment_bruteforce;
use rgcount::EdgeProb;

use crate::commands::estimate_row;
use crate::report::{Check, Format, ResultRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Estimate(Target),
    CrrScan,
    CoverStep,
    MomentCheck,
}

impl FromStr for Kind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "crr-scan" => Kind::CrrScan,
            "cover-step" => Kind::CoverStep,
            "moment-check" => Kind::MomentCheck,
            other => Kind::Estimate(
                other
                    .parse()
                    .map_err(|e| anyhow!("unknown experiment kind {other:?}: {e}"))?,
            ),
        })
    }
}

impl Kind {
    fn label(&self) -> &'static str {
        match self {
            Kind::Estimate(t) => t.as_str(),
            Kind::CrrScan => "crr-scan",
            Kind::CoverStep => "cover-step",
            Kind::MomentCheck => "moment-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: Kind,
    pub n: Vec<u64>,
    pub k: Vec<u64>,
    pub p: Vec<EdgeProb>,
    /// Residual sizes for cover-step grids.
    pub ell: Vec<u64>,
    pub seed: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub rho: Option<f64>,
    pub mode: SampleMode,
    /// Estimator runs per grid cell, each on its own seed.
    pub repetitions: u64,
    /// Graph/sample pairs per crr-scan cell.
    pub samples: u64,
    pub exact: bool,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            kind: Kind::Estimate(Target::Cliques),
            n: vec![10],
            k: vec![3],
            p: vec![EdgeProb::HALF],
            ell: Vec::new(),
            seed: 1,
            epsilon: 0.1,
            delta: 0.1,
            rho: None,
            mode: SampleMode::FixedCount,
            repetitions: 1,
            samples: 100_000,
            exact: false,
            out: None,
            format: None,
        }
    }
}

pub const PRESETS: [&str; 4] = ["crr-growth", "cover-step", "moment-sweep", "unbiasedness"];

pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let base = ExperimentSpec::default();
    Ok(match name {
        "crr-growth" => ExperimentSpec {
            kind: Kind::CrrScan,
            n: (10..=30).step_by(5).collect(),
            k: vec![3],
            ..base
        },
        "cover-step" => ExperimentSpec {
            kind: Kind::CoverStep,
            n: Vec::new(),
            k: vec![2, 3, 4],
            p: vec![EdgeProb::HALF, EdgeProb::new(3, 4)?],
            ell: (50..=500).step_by(50).collect(),
            ..base
        },
        "moment-sweep" => ExperimentSpec {
            kind: Kind::MomentCheck,
            n: (0..=30).step_by(5).collect(),
            k: (1..=8).collect(),
            p: vec![EdgeProb::new(1, 3)?, EdgeProb::HALF, EdgeProb::new(9, 10)?],
            ..base
        },
        "unbiasedness" => ExperimentSpec {
            repetitions: 10,
            ..base
        },
        other => bail!("unknown preset {other:?} (known: {})", PRESETS.join(", ")),
    })
}

/// Parses `a`, `a..b` (inclusive) or `a..b:step`, comma separated.
fn int_list(value: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once("..") {
            Some((lo, rest)) => {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (hi, step.trim().parse::<u64>()?),
                    None => (rest, 1),
                };
                if step == 0 {
                    bail!("range step must be positive in {item:?}");
                }
                let (lo, hi): (u64, u64) = (lo.trim().parse()?, hi.trim().parse()?);
                out.extend((lo..=hi).step_by(step as usize));
            }
            None => out.push(item.parse()?),
        }
    }
    if out.is_empty() {
        bail!("empty list");
    }
    Ok(out)
}

fn parse_bool(value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => bail!("expected a boolean, got {other:?}"),
    }
}

pub fn parse_spec(text: &str) -> Result<ExperimentSpec> {
    let mut pairs = BTreeMap::new();
    let mut lines = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected \"key = value\"", idx + 1))?;
        let key = key.trim().to_string();
        if pairs
            .insert(key.clone(), value.trim().to_string())
            .is_some()
        {
            bail!("line {}: duplicate key {key:?}", idx + 1);
        }
        lines.insert(key, idx + 1);
    }

    let mut spec = match pairs.remove("preset") {
        Some(name) => preset(&name).with_context(|| format!("line {}", lines["preset"]))?,
        None => ExperimentSpec::default(),
    };
    for (key, value) in &pairs {
        let line = lines[key];
        let v = value.as_str();
        let applied: Result<()> = (|| {
            match key.as_str() {
                "kind" | "target" => spec.kind = v.parse()?,
                "n" => spec.n = int_list(v)?,
                "k" => spec.k = int_list(v)?,
                "ell" => spec.ell = int_list(v)?,
                "p" => {
                    spec.p = v
                        .split(',')
                        .map(|s| s.trim().parse::<EdgeProb>().map_err(anyhow::Error::from))
                        .collect::<Result<_>>()?
                }
                "seed" => spec.seed = v.parse()?,
                "epsilon" => spec.epsilon = v.parse()?,
                "delta" => spec.delta = v.parse()?,
                "rho" => spec.rho = Some(v.parse()?),
                "mode" => spec.mode = v.parse()?,
                "repetitions" => spec.repetitions = v.parse()?,
                "samples" => spec.samples = v.parse()?,
                "exact-mode" => spec.exact = parse_bool(v)?,
                "format" => spec.format = Some(v.parse()?),
                "out" => spec.out = Some(PathBuf::from(v)),
                _ => bail!("unknown key {key:?}"),
            }
            Ok(())
        })();
        applied.with_context(|| format!("line {line}"))?;
    }
    spec.validate()?;
    Ok(spec)
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        SampleConfig::new(self.epsilon, self.delta)?;
        if self.repetitions == 0 || self.samples < 2 {
            bail!("repetitions must be positive and samples at least 2");
        }
        if self.kind == Kind::CoverStep && self.ell.is_empty() {
            bail!("cover-step needs an ell list");
        }
        if self.kind != Kind::CoverStep && self.n.is_empty() {
            bail!("n list is empty");
        }
        Ok(())
    }

    /// Grid cells in output order.
    fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        match self.kind {
            Kind::CoverStep => {
                for &k in &self.k {
                    for &p in &self.p {
                        for &ell in &self.ell {
                            cells.push(Cell {
                                n: 0,
                                k,
                                p,
                                ell,
                                rep: 0,
                            });
                        }
                    }
                }
            }
            _ => {
                let reps = if matches!(self.kind, Kind::Estimate(_)) {
                    self.repetitions
                } else {
                    1
                };
                for &n in &self.n {
                    for &k in &self.k {
                        for &p in &self.p {
                            for rep in 0..reps {
                                cells.push(Cell {
                                    n,
                                    k,
                                    p,
                                    ell: 0,
                                    rep,
                                });
                            }
                        }
                    }
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    n: u64,
    k: u64,
    p: EdgeProb,
    ell: u64,
    rep: u64,
}

/// Runs every cell, at most `jobs` at a time, and returns rows in grid order.
pub fn run(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<Vec<ResultRow>> {
    let cells = spec.cells();
    let label = spec.kind.label();
    let work = || {
        cells
            .par_iter()
            .enumerate()
            .map(|(idx, cell)| {
                let start = Instant::now();
                let mut row = run_cell(spec, cell).unwrap_or_else(|e| {
                    let mut row = ResultRow::new(label).failed(&e);
                    row.n = Some(cell.n);
                    row.k = Some(cell.k);
                    row.p = Some(cell.p.to_string());
                    row
                });
                row.id = format!("{label}-{idx:04}");
                row.kind = label.to_string();
                row.wall_seconds = start.elapsed().as_secs_f64();
                row
            })
            .collect()
    };
    match jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(j).build()?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

fn run_cell(spec: &ExperimentSpec, cell: &Cell) -> Result<ResultRow> {
    let k = cell.k as usize;
    match spec.kind {
        Kind::Estimate(target) => {
            let seed = spec.seed + cell.rep;
            let g = generate_gnp(&GenSpec {
                n: cell.n as usize,
                p: cell.p,
                seed,
            });
            let mut cfg = SampleConfig::new(spec.epsilon, spec.delta)?
                .with_mode(spec.mode)
                .with_exact(spec.exact)
                .with_edge_probability(cell.p);
            if let Some(rho) = spec.rho {
                cfg = cfg.with_rho(rho)?;
            }
            Ok(estimate_row(&g, target, k, &cfg, seed)?)
        }
        Kind::CrrScan => crr_scan(cell.n, k, cell.p, spec.seed, spec.samples),
        Kind::CoverStep => cover_step(k, cell.p, cell.ell, spec.ell[0]),
        Kind::MomentCheck => {
            let p = cell.p.to_rational();
            let closed = analytic::binomial_moment_closed(cell.n, k, &p);
            let brute = binomial_moment_bruteforce(cell.n, k as u32, &p);
            let mut row = ResultRow::new("moment-check");
            row.n = Some(cell.n);
            row.k = Some(cell.k);
            row.p = Some(cell.p.to_string());
            row.estimate_log10 = closed.to_f64().filter(|v| *v > 0.0).map(f64::log10);
            row.estimate_exact = Some(closed.to_string());
            row.oracle = Some(brute.to_string());
            row.check = Some(if closed == brute {
                Check::Pass
            } else {
                Check::Fail
            });
            Ok(row)
        }
    }
}

/// Seed of the `i`-th graph in a crr scan.
pub fn scan_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i)
}

/// Mean of the squared raw kernel output over fresh graphs, scaled by the
/// squared expected raw output.
fn crr_scan(n: u64, k: usize, p: EdgeProb, seed: u64, samples: u64) -> Result<ResultRow> {
    let pr = p.to_rational();
    let analytic = analytic::crr_clique(k, n, &pr)?;
    let mean_raw = BigRational::from_integer(analytic::falling_factorial(n, k as u64).into())
        * num_traits::pow(pr, k * (k - 1) / 2);
    let mu = mean_raw
        .to_f64()
        .ok_or_else(|| anyhow!("expected output does not fit in f64"))?;

    let squares: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let gseed = scan_seed(seed, i);
            let g = generate_gnp(&GenSpec {
                n: n as usize,
                p,
                seed: gseed,
            });
            let x = embed_clique_once(&g, k, &mut substream(gseed, 0)).raw_f64() / mu;
            x * x
        })
        .collect();
    let t = samples as f64;
    let mean = squares.iter().sum::<f64>() / t;
    let var = squares.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (t - 1.0);
    let stderr = (var / t).sqrt();
    let analytic = analytic.to_f64().unwrap_or(f64::INFINITY);

    let mut row = ResultRow::new("crr-scan");
    row.target = Some(Target::Cliques.to_string());
    row.n = Some(n);
    row.k = Some(k as u64);
    row.p = Some(p.to_string());
    row.seed = Some(seed);
    row.samples = Some(samples);
    row.empirical_crr = Some(mean);
    row.analytic_crr = Some(analytic);
    row.stderr = Some(stderr);
    row.check = Some(if (mean - analytic).abs() <= 5.0 * stderr {
        Check::Pass
    } else {
        Check::Fail
    });
    Ok(row)
}

/// One residual size of the cover-step comparison; the constant is fitted at
/// `ell_fit`.
fn cover_step(k: usize, p: EdgeProb, ell: u64, ell_fit: u64) -> Result<ResultRow> {
    let pr = p.to_rational();
    let c = analytic::cover_step_scaled_excess(k, ell_fit, &pr)?;
    let step = analytic::crr_cover_step(k, ell, &pr)?;
    let bound = BigRational::one()
        + &c / BigRational::from_integer(BigUint::from(ell + 1 - k as u64).into());

    let mut row = ResultRow::new("cover-step");
    row.k = Some(k as u64);
    row.p = Some(p.to_string());
    row.j = Some(ell);
    row.analytic_crr = step.to_f64();
    row.estimate_exact = Some(step.to_string());
    row.check = Some(if step <= bound {
        Check::Pass
    } else {
        Check::Fail
    });
    row.note = format!(
        "bound {:.12} with C = {:.9} fitted at ell = {ell_fit}",
        bound.to_f64().unwrap_or(f64::NAN),
        c.to_f64().unwrap_or(f64::NAN)
    );
    Ok(row)
}
