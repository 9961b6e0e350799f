//! Exact expectation of an estimator by enumerating every sequence of
//! random choices it can make.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::driver::Target;
use super::embed::{embed_clique_once, embed_cover_once, Chooser, EmbedTrace, Symmetry};
use crate::error::Result;
use crate::graph::Graph;

/// Replays a fixed prefix of choices, then extends it with zeros, recording
/// the size of every choice set it is offered.
struct Scripted {
    script: Vec<usize>,
    sizes: Vec<usize>,
}

impl Chooser for Scripted {
    fn choose(&mut self, len: usize) -> usize {
        let pos = self.sizes.len();
        self.sizes.push(len);
        if pos == self.script.len() {
            self.script.push(0);
        }
        self.script[pos]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSummary {
    /// `E[estimate]` over the estimator's coin flips.
    pub expectation: BigRational,
    /// Probability that the run succeeds.
    pub success_probability: BigRational,
    /// Number of distinct choice sequences.
    pub paths: u64,
}

/// Runs the real embedding kernel once per choice sequence, weighting each
/// outcome by the product of `1/|choice set|` along its path.
pub fn exact_expectation(g: &Graph, k: usize, target: Target) -> Result<PathSummary> {
    let symmetry = match target {
        Target::Covers => Symmetry::cover(g.n(), k.max(1)),
        _ => Symmetry::clique(k),
    };
    let mut success = BigRational::zero();
    let mut paths = 0u64;
    let expectation = path_expectation(g, k, target, |trace, prob| {
        paths += 1;
        if !trace.success {
            return BigRational::zero();
        }
        success += prob;
        BigRational::new(trace.raw_product().into(), symmetry.exact.clone().into())
    })?;
    Ok(PathSummary {
        expectation,
        success_probability: success,
        paths,
    })
}

/// `E[value(trace)]` over every choice sequence of the estimator for
/// `target`. The callback also receives the probability of the path.
pub fn path_expectation<F>(g: &Graph, k: usize, target: Target, mut value: F) -> Result<BigRational>
where
    F: FnMut(&EmbedTrace, &BigRational) -> BigRational,
{
    let graph = match target {
        Target::IndependentSets => g.complement(),
        _ => g.clone(),
    };
    let mut chooser = Scripted {
        script: Vec::new(),
        sizes: Vec::new(),
    };
    let mut total = BigRational::zero();
    loop {
        chooser.sizes.clear();
        let trace = match target {
            Target::Covers => embed_cover_once(&graph, k, &mut chooser)?,
            _ => embed_clique_once(&graph, k, &mut chooser),
        };
        chooser.script.truncate(chooser.sizes.len());

        let weight: BigUint = chooser.sizes.iter().map(|&s| BigUint::from(s)).product();
        let prob = BigRational::new(BigInt::one(), weight.into());
        total += value(&trace, &prob) * &prob;

        // Advance to the next choice sequence, odometer style.
        loop {
            let Some(last) = chooser.script.last_mut() else {
                return Ok(total);
            };
            *last += 1;
            if *last < chooser.sizes[chooser.script.len() - 1] {
                break;
            }
            chooser.script.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: u64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn complete_graph() {
        let s = exact_expectation(&Graph::complete(5), 3, Target::Cliques).unwrap();
        assert_eq!(s.expectation, int(10));
        assert_eq!(s.success_probability, int(1));
        assert_eq!(s.paths, 60);
    }

    #[test]
    fn path_graph_matchings() {
        let s = exact_expectation(&Graph::path(4), 2, Target::Covers).unwrap();
        assert_eq!(s.expectation, int(1));
        let s = exact_expectation(&Graph::complete(4), 2, Target::Covers).unwrap();
        assert_eq!(s.expectation, int(3));
    }

    #[test]
    fn zero_choice_estimator() {
        let s = exact_expectation(&Graph::complete(3), 0, Target::Cliques).unwrap();
        assert_eq!(s.expectation, int(1));
        assert_eq!(s.paths, 1);
    }

    #[test]
    fn failure_paths_count() {
        let s = exact_expectation(&Graph::empty(4), 2, Target::Cliques).unwrap();
        assert!(s.expectation.is_zero());
        assert!(s.success_probability.is_zero());
        assert_eq!(s.paths, 4);
    }
}
