use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use proptest::prelude::*;
use rgcount::analytic::{
    self, binomial_moment_closed, crr_clique, crr_cover_step, crr_cover_step_literal,
    nesting_closed, AnalyticContext,
};
use rgcount::estimators::{path_expectation, Target};
use rgcount::oracles::{binomial_moment_bruteforce, nesting_bruteforce};
use rgcount::Graph;

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Averages `E_A[(X_1 ... X_k)^2]` over every graph on `n` vertices with its
/// `G(n,p)` weight, by enumerating all edge subsets and all choice paths.
fn second_moment_over_all_graphs(n: usize, k: usize, p: &BigRational) -> BigRational {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let q = BigRational::from_integer(1.into()) - p;
    let mut total = BigRational::zero();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let m = edges.len() as u32;
        let weight = Pow::pow(p, m) * Pow::pow(&q, pairs.len() as u32 - m);
        let g = Graph::from_edges(n, edges).unwrap();
        let e = path_expectation(&g, k, Target::Cliques, |t, _| {
            let raw = t.raw_product();
            BigRational::from_integer((&raw * &raw).into())
        })
        .unwrap();
        total += e * weight;
    }
    total
}

#[test]
fn nesting_is_the_averaged_second_moment() {
    for &(n, k) in &[(3usize, 2usize), (4, 2), (4, 3), (5, 2), (5, 3), (5, 4)] {
        for p in [r(1, 2), r(1, 3)] {
            let lhs = second_moment_over_all_graphs(n, k, &p);
            assert_eq!(lhs, nesting_closed(k, n as u64, &p).unwrap(), "n={n} k={k}");
        }
    }
}

#[test]
fn context_matches_free_functions() {
    let p = r(2, 5);
    let mut ctx = AnalyticContext::with_probability(3, p.clone());
    assert!(ctx.nesting(5, 10).is_err());
    ctx.grow(6);
    for k in 2..=6 {
        for n in k as u64..20 {
            assert_eq!(
                ctx.nesting(k, n).unwrap(),
                nesting_closed(k, n, &p).unwrap()
            );
            assert_eq!(ctx.crr_clique(k, n).unwrap(), crr_clique(k, n, &p).unwrap());
        }
        assert_eq!(
            ctx.binomial_moment(9, k).unwrap(),
            binomial_moment_closed(9, k, &p)
        );
        assert_eq!(ctx.stirling(k, 2).unwrap(), analytic::stirling_closed(k, 2));
    }
    assert!(AnalyticContext::new(4).nesting(2, 5).is_err());
}

#[test]
fn shared_context_across_threads() {
    let ctx = AnalyticContext::with_probability(5, r(1, 2));
    std::thread::scope(|s| {
        for k in 2..=5 {
            let ctx = &ctx;
            s.spawn(move || {
                for n in 10..30 {
                    assert_eq!(
                        ctx.crr_clique(k, n).unwrap(),
                        crr_clique(k, n, &r(1, 2)).unwrap()
                    );
                }
            });
        }
    });
}

#[test]
fn literal_and_consistent_cover_indexing_differ() {
    let half = r(1, 2);
    let n = 12u64;
    for i in 1..n / 3 {
        let lit = crr_cover_step_literal(3, n, i, &half).unwrap();
        let consistent = crr_cover_step(3, n - 3 * (i - 1), &half).unwrap();
        assert!(lit > consistent, "i={i}");
    }
}

#[test]
fn clique_crr_grows_with_k() {
    let half = r(1, 2);
    let mut prev = 0.0;
    for k in 2..=8 {
        let c = crr_clique(k, 64, &half).unwrap().to_f64().unwrap();
        assert!(c >= 1.0 && c > prev, "k={k} crr={c}");
        prev = c;
    }
}

proptest! {
    #[test]
    fn stirling_recurrence(k in 1usize..25, j in 1usize..25) {
        prop_assume!(j <= k);
        let lhs = analytic::stirling_closed(k + 1, j);
        let rhs = analytic::stirling_closed(k, j) * BigUint::from(j) + analytic::stirling_closed(k, j - 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn moments_agree_off_grid(n in 0u64..40, k in 0u32..7, num in 0i64..=12) {
        let p = r(num, 12);
        prop_assert_eq!(binomial_moment_closed(n, k as usize, &p), binomial_moment_bruteforce(n, k, &p));
    }

    #[test]
    fn nesting_agrees_off_grid(k in 2usize..5, n in 0u64..18, num in 0i64..=7) {
        let p = r(num, 7);
        prop_assert_eq!(nesting_closed(k, n, &p).unwrap(), nesting_bruteforce(k, n, &p).unwrap());
    }
}
