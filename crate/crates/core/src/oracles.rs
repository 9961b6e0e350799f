//! Brute-force exact counters used as ground truth.
//!
//! Everything here is integer or exact rational arithmetic and is written
//! straight from the defining sums, independently of the closed forms in
//! [`crate::analytic`].

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// An exact non-negative count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactCount(pub BigUint);

impl ExactCount {
    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.0.clone()))
    }
}

impl fmt::Display for ExactCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for ExactCount {
    fn from(v: u64) -> Self {
        ExactCount(BigUint::from(v))
    }
}

impl PartialEq<u64> for ExactCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

/// Number of k-subsets of the vertex set that induce a complete subgraph.
///
/// Ordered backtracking: each clique is generated once, in increasing
/// vertex order, by extending with candidates above the current maximum.
pub fn count_cliques_exact(g: &Graph, k: usize) -> ExactCount {
    if k == 0 {
        return ExactCount::from(1);
    }
    fn extend(g: &Graph, cand: &VertexSet, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        if cand.len() < left {
            return 0;
        }
        let mut total = 0;
        for v in cand {
            let mut next = cand.above(v);
            next.intersect_with(g.neighbors(v));
            total += extend(g, &next, left - 1);
        }
        total
    }
    ExactCount::from(extend(g, &VertexSet::full(g.n()), k))
}

pub fn count_independent_sets_exact(g: &Graph, k: usize) -> ExactCount {
    count_cliques_exact(&g.complement(), k)
}

/// Number of unordered partitions of the vertex set into `n/k` blocks, each
/// inducing a k-clique.
///
/// The lowest uncovered vertex is always placed first, so each partition is
/// built along exactly one branch.
pub fn count_clique_covers_exact(g: &Graph, k: usize) -> Result<ExactCount> {
    let n = g.n();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::Config(format!(
            "clique covers need k to divide n (n = {n}, k = {k})"
        )));
    }

    fn blocks_with(
        g: &Graph,
        uncovered: &VertexSet,
        cand: &VertexSet,
        left: usize,
        k: usize,
    ) -> u64 {
        if left == 0 {
            return covers(g, uncovered, k);
        }
        let mut total = 0;
        for v in cand {
            let mut next = cand.above(v);
            next.intersect_with(g.neighbors(v));
            let mut rest = uncovered.clone();
            rest.remove(v);
            total += blocks_with(g, &rest, &next, left - 1, k);
        }
        total
    }

    fn covers(g: &Graph, uncovered: &VertexSet, k: usize) -> u64 {
        let Some(v) = uncovered.first() else {
            return 1;
        };
        let mut rest = uncovered.clone();
        rest.remove(v);
        let mut cand = rest.clone();
        cand.intersect_with(g.neighbors(v));
        blocks_with(g, &rest, &cand, k - 1, k)
    }

    Ok(ExactCount::from(covers(g, &VertexSet::full(n), k)))
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

fn powers(x: &BigRational, upto: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(upto + 1);
    let mut cur = BigRational::one();
    for _ in 0..=upto {
        out.push(cur.clone());
        cur *= x;
    }
    out
}

fn int(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `E[X^k]` for `X ~ Binomial(n, p)`, summed term by term.
pub fn binomial_moment_bruteforce(n: u64, k: u32, p: &BigRational) -> BigRational {
    let n_us = n as usize;
    let q = BigRational::one() - p;
    let pp = powers(p, n_us);
    let qp = powers(&q, n_us);
    let mut sum = BigRational::zero();
    for i in 0..=n {
        let ik: BigUint = Pow::pow(BigUint::from(i), k);
        if ik.is_zero() {
            continue;
        }
        let w = ik * binomial(n, i);
        sum += int(w) * &pp[i as usize] * &qp[(n - i) as usize];
    }
    sum
}

/// The k-nesting `N(k, n, p)` evaluated by its recursive definition,
/// memoised over `(k, i)`:
///
/// `N(2, n) = n^2 * sum_{i=1}^{n-1} i^2 C(n-1, i) p^i (1-p)^(n-1-i)` and
/// `N(k, n) = n^2 * sum_{i=k-1}^{n-1} N(k-1, i) C(n-1, i) p^i (1-p)^(n-1-i)`.
pub fn nesting_bruteforce(k: usize, n: u64, p: &BigRational) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "nesting needs k >= 2, got {k}"
        )));
    }
    let q = BigRational::one() - p;
    let pp = powers(p, n as usize);
    let qp = powers(&q, n as usize);
    let mut memo: HashMap<(usize, u64), BigRational> = HashMap::new();

    fn eval(
        k: usize,
        n: u64,
        pp: &[BigRational],
        qp: &[BigRational],
        memo: &mut HashMap<(usize, u64), BigRational>,
    ) -> BigRational {
        if let Some(v) = memo.get(&(k, n)) {
            return v.clone();
        }
        let mut sum = BigRational::zero();
        if n >= 1 {
            let lo = if k == 2 { 1 } else { k as u64 - 1 };
            for i in lo..n {
                let inner = if k == 2 {
                    int(BigUint::from(i * i))
                } else {
                    eval(k - 1, i, pp, qp, memo)
                };
                if inner.is_zero() {
                    continue;
                }
                sum +=
                    inner * int(binomial(n - 1, i)) * &pp[i as usize] * &qp[(n - 1 - i) as usize];
            }
        }
        let v = sum * int(BigUint::from(n) * BigUint::from(n));
        memo.insert((k, n), v.clone());
        v
    }

    Ok(eval(k, n, &pp, &qp, &mut memo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_gnp, GenSpec};
    use crate::prob::EdgeProb;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, e).unwrap()
    }

    #[test]
    fn clique_examples() {
        assert_eq!(count_cliques_exact(&Graph::complete(6), 3), 20);
        assert_eq!(count_cliques_exact(&Graph::cycle(5), 3), 0);
        assert_eq!(count_cliques_exact(&petersen(), 2), 15);
        assert_eq!(count_cliques_exact(&petersen(), 3), 0);
        assert_eq!(count_cliques_exact(&Graph::complete(4), 0), 1);
        assert_eq!(count_cliques_exact(&Graph::complete(4), 5), 0);
    }

    #[test]
    fn independent_set_examples() {
        assert_eq!(count_independent_sets_exact(&Graph::empty(6), 3), 20);
        assert_eq!(count_independent_sets_exact(&Graph::complete(6), 2), 0);
        assert_eq!(count_independent_sets_exact(&Graph::cycle(5), 2), 5);
    }

    #[test]
    fn cover_examples() {
        assert_eq!(
            count_clique_covers_exact(&Graph::complete(4), 2).unwrap(),
            3
        );
        assert_eq!(
            count_clique_covers_exact(&Graph::complete(6), 3).unwrap(),
            10
        );
        assert_eq!(count_clique_covers_exact(&Graph::cycle(6), 2).unwrap(), 2);
        assert_eq!(count_clique_covers_exact(&Graph::path(4), 2).unwrap(), 1);
        assert_eq!(count_clique_covers_exact(&Graph::empty(0), 2).unwrap(), 1);
        assert!(count_clique_covers_exact(&Graph::complete(5), 2).is_err());
        assert!(count_clique_covers_exact(&Graph::complete(4), 0).is_err());
    }

    #[test]
    fn complete_graph_counts() {
        for n in 0..=12u64 {
            for k in 0..=n {
                assert_eq!(
                    count_cliques_exact(&Graph::complete(n as usize), k as usize).0,
                    binomial(n, k)
                );
            }
        }
        let mut double_fact = 1u64;
        for m in 1..=6u64 {
            double_fact *= 2 * m - 1;
            assert_eq!(
                count_clique_covers_exact(&Graph::complete(2 * m as usize), 2).unwrap(),
                double_fact
            );
        }
    }

    /// Subset-bitmask enumeration, a second order of enumeration to check the
    /// backtracking counter against.
    fn cliques_by_mask(g: &Graph) -> Vec<u64> {
        let n = g.n();
        let mut counts = vec![0u64; n + 1];
        for mask in 0u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if g.is_clique(&members) {
                counts[members.len()] += 1;
            }
        }
        counts
    }

    #[test]
    fn clique_polynomial_agrees_with_mask_enumeration() {
        for seed in 0..25 {
            let n = 4 + (seed as usize % 9);
            let g = generate_gnp(&GenSpec {
                n,
                p: EdgeProb::new(3, 5).unwrap(),
                seed,
            });
            let by_mask = cliques_by_mask(&g);
            let x = r(1, 3);
            let mut lhs = BigRational::zero();
            let mut rhs = BigRational::zero();
            for (k, &c) in by_mask.iter().enumerate() {
                let xk = Pow::pow(&x, k as u32);
                lhs += count_cliques_exact(&g, k).to_rational() * &xk;
                rhs += BigRational::from_integer(c.into()) * xk;
                assert_eq!(count_cliques_exact(&g, k), c);
                assert_eq!(count_independent_sets_exact(&g.complement(), k), c);
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn moment_examples() {
        let p = r(2, 7);
        for n in 0..10u64 {
            assert_eq!(binomial_moment_bruteforce(n, 0, &p), BigRational::one());
            assert_eq!(
                binomial_moment_bruteforce(n, 1, &p),
                p.clone() * r(n as i64, 1)
            );
        }
        assert_eq!(binomial_moment_bruteforce(4, 2, &r(1, 2)), r(5, 1));
    }

    #[test]
    fn nesting_examples() {
        assert_eq!(nesting_bruteforce(2, 3, &r(1, 2)).unwrap(), r(27, 2));
        for n in 2..9i64 {
            assert_eq!(
                nesting_bruteforce(2, n as u64, &r(1, 1)).unwrap(),
                r(n * n * (n - 1) * (n - 1), 1)
            );
        }
        assert!(nesting_bruteforce(1, 3, &r(1, 2)).is_err());
        // ell < k: no k-clique fits, second moment vanishes.
        assert!(nesting_bruteforce(4, 3, &r(1, 2)).unwrap().is_zero());
    }
}
