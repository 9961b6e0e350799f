use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use rgcount::analytic;
use rgcount::estimators::{estimate, SampleConfig, Target};
use rgcount::graph::{generate_gnp, load_graph, save_graph, to_edge_list, GenSpec};
use rgcount::oracles::{
    count_clique_covers_exact, count_cliques_exact, count_independent_sets_exact, ExactCount,
};
use rgcount::{EdgeProb, Graph};

use crate::report::{Check, ResultRow};

/// Largest graph for which `estimate` also runs the exact oracle.
pub const ORACLE_MAX_N: usize = 20;

/// Above this many candidate subsets the exact command warns before running.
const EXACT_NODE_BUDGET: f64 = 1e9;

pub fn gen(spec: &GenSpec, out: Option<&Path>) -> Result<()> {
    let g = generate_gnp(spec);
    match out {
        Some(path) => save_graph(&g, path)?,
        None => print!("{}", to_edge_list(&g)),
    }
    Ok(())
}

pub fn oracle(g: &Graph, target: Target, k: usize) -> Result<ExactCount> {
    Ok(match target {
        Target::Cliques => count_cliques_exact(g, k),
        Target::IndependentSets => count_independent_sets_exact(g, k),
        Target::Covers => count_clique_covers_exact(g, k)?,
    })
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

pub fn exact_row(g: &Graph, target: Target, k: usize) -> Result<ResultRow> {
    let n = g.n();
    let heavy = match target {
        Target::Covers => n > 40,
        _ => ln_binomial(n, k) > EXACT_NODE_BUDGET.ln(),
    };
    if heavy {
        eprintln!("warning: exact {target} count on n = {n}, k = {k} may take a very long time");
    }
    let start = Instant::now();
    let count = oracle(g, target, k)?;
    let mut row = ResultRow::new("exact");
    row.target = Some(target.to_string());
    row.n = Some(n as u64);
    row.k = Some(k as u64);
    row.oracle = Some(count.to_string());
    row.estimate_exact = Some(count.to_string());
    row.estimate_log10 = log10_biguint(&count.0);
    row.wall_seconds = start.elapsed().as_secs_f64();
    Ok(row)
}

fn log10_biguint(v: &BigUint) -> Option<f64> {
    if v.is_zero() {
        return None;
    }
    let bits = v.bits();
    let shift = bits.saturating_sub(64);
    let top = (v >> shift).to_f64()?;
    Some(top.log10() + shift as f64 * std::f64::consts::LOG10_2)
}

/// Analytic critical ratio of averages for `target` on `G(n, p)`.
pub fn analytic_crr(target: Target, k: usize, n: usize, p: EdgeProb) -> Option<f64> {
    let r = match target {
        Target::Cliques => analytic::crr_clique(k, n as u64, &p.to_rational()),
        Target::IndependentSets => analytic::crr_clique(k, n as u64, &p.complement().to_rational()),
        Target::Covers => analytic::crr_cover_total(k, n as u64, &p.to_rational()),
    };
    r.ok()?.to_f64()
}

/// Runs the driver on `g` and fills a row; the oracle and check columns are
/// filled when `g` is small enough.
pub fn estimate_row(
    g: &Graph,
    target: Target,
    k: usize,
    cfg: &SampleConfig,
    seed: u64,
) -> Result<ResultRow> {
    let start = Instant::now();
    let report = estimate(g, k, target, cfg, seed)?;
    let mut row = ResultRow::new("estimate");
    row.target = Some(target.to_string());
    row.n = Some(g.n() as u64);
    row.k = Some(k as u64);
    row.p = cfg.edge_probability.map(|p| p.to_string());
    row.seed = Some(seed);
    row.samples = Some(report.samples);
    let log10 = report.estimate.log10();
    row.estimate_log10 = log10.is_finite().then_some(log10);
    if report.estimate.is_exact() {
        row.estimate_exact = Some(report.estimate.to_string());
    }
    row.empirical_crr = report.critical_ratio;
    row.analytic_crr = cfg
        .edge_probability
        .and_then(|p| analytic_crr(target, k, g.n(), p));

    let t = report.samples as f64;
    let mean = report.estimate.to_f64();
    if let Some(crr) = report.critical_ratio {
        if report.samples > 1 {
            let rel_var = ((crr - 1.0) * t / (t - 1.0)).max(0.0);
            row.stderr = Some(mean * (rel_var / t).sqrt());
        }
    } else {
        row.stderr = Some(0.0);
    }

    if g.n() <= ORACLE_MAX_N {
        let truth = oracle(g, target, k)?;
        row.oracle = Some(truth.to_string());
        let truth_r = truth.to_rational();
        if !truth_r.is_zero() {
            row.relative_error = match report.estimate.to_rational() {
                Some(est) => ((est - &truth_r).abs() / &truth_r).to_f64(),
                None => truth_r.to_f64().map(|t| (mean - t).abs() / t),
            };
        }
        let truth_f = truth_r.to_f64().unwrap_or(f64::INFINITY);
        let err = match report.estimate.to_rational() {
            Some(est) => (est - &truth_r).abs().to_f64().unwrap_or(f64::INFINITY),
            None => (mean - truth_f).abs(),
        };
        let allowed = 3.0 * row.stderr.unwrap_or(0.0);
        row.check = Some(if err <= allowed {
            Check::Pass
        } else {
            Check::Fail
        });
    }
    row.wall_seconds = start.elapsed().as_secs_f64();
    Ok(row)
}

/// Analytic queries. Each returns the plain printed value plus an optional
/// note for stderr.
#[derive(Debug, Clone)]
pub enum Query {
    Moment {
        n: u64,
        k: usize,
        p: EdgeProb,
    },
    Nesting {
        k: usize,
        n: u64,
        p: EdgeProb,
    },
    Fpoly {
        k: usize,
        j: usize,
        p: Option<EdgeProb>,
    },
    Crr {
        k: usize,
        n: u64,
        p: EdgeProb,
    },
    CoverCrr {
        k: usize,
        n: u64,
        p: EdgeProb,
        step: Option<u64>,
        literal: Option<u64>,
    },
    Stirling {
        k: usize,
        j: usize,
    },
    H {
        k: usize,
        i: usize,
        ell: f64,
        p: f64,
    },
    G {
        n: f64,
        i: Option<f64>,
        eps: f64,
        p: f64,
    },
}

fn rational(r: &BigRational) -> String {
    r.to_string()
}

pub fn analytic_query(q: &Query) -> Result<(String, Option<String>)> {
    Ok(match q {
        Query::Moment { n, k, p } => (
            rational(&analytic::binomial_moment_closed(*n, *k, &p.to_rational())),
            None,
        ),
        Query::Nesting { k, n, p } => (
            rational(&analytic::nesting_closed(*k, *n, &p.to_rational())?),
            None,
        ),
        Query::Fpoly { k, j, p } => {
            let poly = analytic::f_polynomial(*k, *j);
            let note = (*k < 2 || *j < *k || *j + 1 > 2 * *k)
                .then(|| format!("(k, j) = ({k}, {j}) is outside the band k <= j <= 2k - 1 with k >= 2; value is 0"));
            match p {
                Some(p) => (rational(&poly.evaluate(&p.to_rational())), note),
                None => (poly.to_string(), note),
            }
        }
        Query::Crr { k, n, p } => (
            rational(&analytic::crr_clique(*k, *n, &p.to_rational())?),
            None,
        ),
        Query::CoverCrr {
            k,
            n,
            p,
            step,
            literal,
        } => {
            let p = p.to_rational();
            let value = match (step, literal) {
                (Some(_), Some(_)) => bail!("--step and --literal are mutually exclusive"),
                (Some(ell), None) => analytic::crr_cover_step(*k, *ell, &p)?,
                (None, Some(i)) => analytic::crr_cover_step_literal(*k, *n, *i, &p)?,
                (None, None) => analytic::crr_cover_total(*k, *n, &p)?,
            };
            (rational(&value), None)
        }
        Query::Stirling { k, j } => (analytic::stirling_closed(*k, *j).to_string(), None),
        Query::H { k, i, ell, p } => (analytic::h_bound(*k, *i, *ell, *p).to_string(), None),
        Query::G {
            n,
            i: Some(i),
            eps,
            p,
        } => (analytic::g_exponent(*n, *i, *eps, *p)?.to_string(), None),
        Query::G { n, i: None, eps, p } => {
            let (arg, value) = analytic::g_argmax(*n, *eps, *p)?;
            (format!("{arg} {value}"), None)
        }
    })
}

pub fn load(path: &Path) -> Result<Graph> {
    load_graph(path).with_context(|| format!("loading graph {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> EdgeProb {
        EdgeProb::HALF
    }

    #[test]
    fn analytic_examples() {
        let q = |q: Query| analytic_query(&q).unwrap().0;
        assert_eq!(
            q(Query::Moment {
                n: 4,
                k: 2,
                p: half()
            }),
            "5"
        );
        assert_eq!(
            q(Query::Fpoly {
                k: 3,
                j: 4,
                p: None
            }),
            "5:3 4:1"
        );
        assert_eq!(
            q(Query::Crr {
                k: 2,
                n: 4,
                p: half()
            }),
            "4/3"
        );
        assert_eq!(q(Query::Stirling { k: 4, j: 2 }), "7");
    }

    #[test]
    fn out_of_band_fpoly_is_zero_with_note() {
        let (value, note) = analytic_query(&Query::Fpoly {
            k: 3,
            j: 6,
            p: None,
        })
        .unwrap();
        assert_eq!(value, "0");
        assert!(note.unwrap().contains("outside"));
    }

    #[test]
    fn log10_of_big_integers() {
        let v = BigUint::from(10u32).pow(40);
        assert!((log10_biguint(&v).unwrap() - 40.0).abs() < 1e-12);
        assert_eq!(log10_biguint(&BigUint::zero()), None);
    }

    #[test]
    fn exact_examples() {
        let row = exact_row(&Graph::complete(6), Target::Cliques, 3).unwrap();
        assert_eq!(row.oracle.as_deref(), Some("20"));
        let row = exact_row(&Graph::complete(4), Target::Covers, 2).unwrap();
        assert_eq!(row.oracle.as_deref(), Some("3"));
        let row = exact_row(&Graph::cycle(5), Target::IndependentSets, 2).unwrap();
        assert_eq!(row.oracle.as_deref(), Some("5"));
    }
}
