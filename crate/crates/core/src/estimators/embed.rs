//! Single-run embedding kernels.
//!
//! A clique is embedded one vertex at a time: step `i` draws uniformly from
//! the common neighbourhood `N_i` of the vertices already placed (all of `V`
//! at step 0) and records `X_i = |N_i|`. The run fails as soon as some `N_i`
//! is empty. The product `X_0 ... X_{k-1}` is the inverse probability of the
//! ordered embedding that was produced, so dividing by the number of
//! orderings gives an unbiased count.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use super::scaled::{ln_biguint, ScaledValue};
use crate::error::{Error, Result};
use crate::graph::{remove_vertices, Graph, VertexSet};

/// Source of the uniform choices made by an embedding run.
pub trait Chooser {
    /// Returns an index in `0..len`; `len` is always positive.
    fn choose(&mut self, len: usize) -> usize;
}

/// Uniform choices from a random number generator.
#[derive(Debug, Clone)]
pub struct RngChooser<R>(pub R);

impl<R: Rng> Chooser for RngChooser<R> {
    fn choose(&mut self, len: usize) -> usize {
        self.0.gen_range(0..len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedTrace {
    /// Embedded vertices in the order they were placed, in the labels of
    /// the input graph.
    pub chosen: Vec<usize>,
    /// Choice-set sizes, one per placed vertex.
    pub factors: Vec<u64>,
    pub success: bool,
}

impl EmbedTrace {
    /// The raw (ordered) estimate `prod X_i`, or 0 on failure.
    pub fn raw_product(&self) -> BigUint {
        if !self.success {
            return BigUint::default();
        }
        self.factors.iter().map(|&x| BigUint::from(x)).product()
    }

    pub fn raw_ln(&self) -> f64 {
        if !self.success {
            return f64::NEG_INFINITY;
        }
        self.factors.iter().map(|&x| (x as f64).ln()).sum()
    }

    pub fn raw_f64(&self) -> f64 {
        if !self.success {
            return 0.0;
        }
        self.factors.iter().map(|&x| x as f64).product()
    }

    /// `raw / symmetry`, exact or in the log domain.
    pub fn estimate(&self, symmetry: &Symmetry, exact: bool) -> ScaledValue {
        if !self.success {
            return ScaledValue::Zero;
        }
        if exact {
            ScaledValue::from_rational(BigRational::new(
                self.raw_product().into(),
                symmetry.exact.clone().into(),
            ))
        } else {
            ScaledValue::from_ln(self.raw_ln() - symmetry.ln)
        }
    }
}

/// The number of embedding sequences that map to one unordered copy of the
/// template.
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetry {
    pub exact: BigUint,
    pub ln: f64,
}

impl Symmetry {
    fn from_exact(exact: BigUint) -> Self {
        let ln = ln_biguint(&exact);
        Symmetry { exact, ln }
    }

    /// `k!`.
    pub fn clique(k: usize) -> Self {
        Symmetry::from_exact(factorial(k))
    }

    /// `(k!)^(n/k) (n/k)!`. Requires `k | n`.
    pub fn cover(n: usize, k: usize) -> Self {
        let blocks = n / k;
        Symmetry::from_exact(num_traits::pow(factorial(k), blocks) * factorial(blocks))
    }
}

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * i)
}

/// One run of the clique embedding on `g`.
pub fn embed_clique_once<C: Chooser + ?Sized>(g: &Graph, k: usize, chooser: &mut C) -> EmbedTrace {
    let mut trace = EmbedTrace {
        chosen: Vec::with_capacity(k),
        factors: Vec::with_capacity(k),
        success: false,
    };
    if k > g.n() {
        return trace;
    }
    // Running intersection; equals common_neighbors(chosen) because the
    // chosen vertices always form a clique and adjacency is irreflexive.
    let mut cand = VertexSet::full(g.n());
    for _ in 0..k {
        let size = cand.len();
        if size == 0 {
            return trace;
        }
        let v = cand.nth(chooser.choose(size)).expect("choice within range");
        trace.chosen.push(v);
        trace.factors.push(size as u64);
        cand.intersect_with(g.neighbors(v));
    }
    trace.success = true;
    trace
}

/// One run of the cover embedding: k-cliques are embedded one after another
/// into the residual graph until every vertex is covered.
///
/// The trace holds all step factors across cliques. Divide its raw product
/// by [`Symmetry::cover`] to get the estimate.
pub fn embed_cover_once<C: Chooser + ?Sized>(
    g: &Graph,
    k: usize,
    chooser: &mut C,
) -> Result<EmbedTrace> {
    let n = g.n();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::Config(format!(
            "clique covers need k to divide n (n = {n}, k = {k})"
        )));
    }
    let mut trace = EmbedTrace {
        chosen: Vec::with_capacity(n),
        factors: Vec::with_capacity(n),
        success: false,
    };
    let mut residual = g.clone();
    let mut labels: Vec<usize> = (0..n).collect();
    while residual.n() > 0 {
        let step = embed_clique_once(&residual, k, chooser);
        trace.factors.extend_from_slice(&step.factors);
        trace.chosen.extend(step.chosen.iter().map(|&v| labels[v]));
        if !step.success {
            return Ok(trace);
        }
        let removed = VertexSet::from_members(residual.n(), step.chosen.iter().copied());
        let next = remove_vertices(&residual, &removed);
        labels = next.original.iter().map(|&v| labels[v]).collect();
        residual = next.graph;
    }
    trace.success = true;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::common_neighbors;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> RngChooser<ChaCha8Rng> {
        RngChooser(ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn complete_graph_is_deterministic() {
        for seed in 0..20 {
            let t = embed_clique_once(&Graph::complete(5), 3, &mut rng(seed));
            assert!(t.success);
            assert_eq!(t.factors, vec![5, 4, 3]);
            assert_eq!(
                t.estimate(&Symmetry::clique(3), true),
                ScaledValue::from(10)
            );
        }
    }

    #[test]
    fn empty_graph_always_fails() {
        for seed in 0..20 {
            let t = embed_clique_once(&Graph::empty(6), 2, &mut rng(seed));
            assert!(!t.success);
            assert_eq!(t.factors, vec![6]);
            assert!(t.estimate(&Symmetry::clique(2), false).is_zero());
        }
    }

    #[test]
    fn cycle_edges() {
        for seed in 0..20 {
            let t = embed_clique_once(&Graph::cycle(5), 2, &mut rng(seed));
            assert!(t.success);
            assert_eq!(t.factors, vec![5, 2]);
            assert_eq!(t.estimate(&Symmetry::clique(2), true), ScaledValue::from(5));
        }
    }

    #[test]
    fn k_larger_than_n_is_zero() {
        let t = embed_clique_once(&Graph::complete(3), 4, &mut rng(1));
        assert!(!t.success);
        assert!(t.factors.is_empty());
    }

    #[test]
    fn trace_sizes_match_common_neighbors() {
        use crate::graph::{generate_gnp, GenSpec};
        use crate::prob::EdgeProb;
        for seed in 0..50 {
            let g = generate_gnp(&GenSpec {
                n: 20,
                p: EdgeProb::new(2, 3).unwrap(),
                seed,
            });
            let t = embed_clique_once(&g, 4, &mut rng(seed));
            for (i, &x) in t.factors.iter().enumerate() {
                let prefix = VertexSet::from_members(20, t.chosen[..i].iter().copied());
                assert_eq!(common_neighbors(&g, &prefix).len() as u64, x);
            }
            if t.success {
                assert!(g.is_clique(&t.chosen));
                assert_eq!(
                    t.raw_product(),
                    t.factors.iter().map(|&x| BigUint::from(x)).product()
                );
            }
        }
    }

    #[test]
    fn cover_on_complete_graphs() {
        let t = embed_cover_once(&Graph::complete(4), 2, &mut rng(3)).unwrap();
        assert_eq!(t.factors, vec![4, 3, 2, 1]);
        assert_eq!(Symmetry::cover(4, 2).exact, BigUint::from(8u32));
        assert_eq!(
            t.estimate(&Symmetry::cover(4, 2), true),
            ScaledValue::from(3)
        );

        let t = embed_cover_once(&Graph::complete(6), 3, &mut rng(3)).unwrap();
        assert_eq!(t.raw_product(), BigUint::from(720u32));
        assert_eq!(Symmetry::cover(6, 3).exact, BigUint::from(72u32));
        assert_eq!(
            t.estimate(&Symmetry::cover(6, 3), true),
            ScaledValue::from(10)
        );
    }

    #[test]
    fn cover_labels_partition_the_graph() {
        let g = Graph::complete(9);
        let t = embed_cover_once(&g, 3, &mut rng(8)).unwrap();
        let mut seen = t.chosen.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn cover_rejects_non_divisor() {
        assert!(matches!(
            embed_cover_once(&Graph::complete(5), 2, &mut rng(0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn cover_failure_is_zero() {
        // Star K_{1,3}: no perfect matching exists.
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        for seed in 0..20 {
            let t = embed_cover_once(&g, 2, &mut rng(seed)).unwrap();
            assert!(!t.success);
            assert!(t.estimate(&Symmetry::cover(4, 2), true).is_zero());
        }
    }
}
