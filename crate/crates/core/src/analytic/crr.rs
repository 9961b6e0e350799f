//! k-nesting values and critical ratios of averages.
//!
//! For the ordered clique estimator `X = X_1 ... X_k` on `G(n, p)`,
//! `E[X^2] = N(k, n, p)` and `E[X] = (n)_k p^C(k,2)`, so the critical ratio
//! of averages is `N(k, n, p) / ((n)_k p^C(k,2))^2`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::moments::{falling_factorial, ratio};
use super::AnalyticContext;
use crate::error::{Error, Result};

fn pairs(k: usize) -> u32 {
    (k * k.saturating_sub(1) / 2) as u32
}

pub(super) fn nesting_with(ctx: &AnalyticContext, k: usize, ell: u64) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "nesting needs k >= 2, got {k}"
        )));
    }
    let mut sum = BigRational::zero();
    for j in k..2 * k {
        let ff = falling_factorial(ell, j as u64);
        if ff.is_zero() {
            break;
        }
        sum += ratio(BigUint::from(ell) * ff) * ctx.f_value(k, j)?;
    }
    Ok(sum)
}

/// `N(k, l, p) = sum_{j=k}^{2k-1} l (l)_j f_{k,j}(p)`.
pub fn nesting_closed(k: usize, ell: u64, p: &BigRational) -> Result<BigRational> {
    AnalyticContext::with_probability(k, p.clone()).nesting(k, ell)
}

fn mean_ordered(ctx: &AnalyticContext, k: usize, n: u64) -> Result<BigRational> {
    let p = ctx.bound()?.p.clone();
    let m = ratio(falling_factorial(n, k as u64)) * Pow::pow(&p, pairs(k));
    if m.is_zero() {
        return Err(Error::UndefinedRatio(format!(
            "expected number of ordered {k}-cliques is zero (n = {n}, p = {p})"
        )));
    }
    Ok(m)
}

pub(super) fn crr_clique_with(ctx: &AnalyticContext, k: usize, n: u64) -> Result<BigRational> {
    let m = mean_ordered(ctx, k, n)?;
    Ok(ctx.nesting(k, n)? / (&m * &m))
}

/// Critical ratio of averages of the clique estimator on `G(n, p)`.
pub fn crr_clique(k: usize, n: u64, p: &BigRational) -> Result<BigRational> {
    AnalyticContext::with_probability(k, p.clone()).crr_clique(k, n)
}

/// The critical ratio split by `i = 0..k`: term `i` is
/// `n (n)_{2k-i-1} f_{k,2k-i-1}(p) / ((n)_k p^C(k,2))^2`.
pub fn crr_clique_terms(k: usize, n: u64, p: &BigRational) -> Result<Vec<BigRational>> {
    let ctx = AnalyticContext::with_probability(k, p.clone());
    let m = mean_ordered(&ctx, k, n)?;
    let denom = &m * &m;
    (0..k)
        .map(|i| {
            let j = 2 * k - i - 1;
            let num =
                ratio(BigUint::from(n) * falling_factorial(n, j as u64)) * ctx.f_value(k, j)?;
            Ok(num / &denom)
        })
        .collect()
}

/// Critical ratio of one cover step: embedding a k-clique into a residual
/// graph on `ell` vertices.
pub fn crr_cover_step(k: usize, ell: u64, p: &BigRational) -> Result<BigRational> {
    crr_clique(k, ell, p)
}

/// The per-step ratio with the alternative residual indexing
/// `N(k, n-ki+k, p) / ((n-ki)_k p^C(k,2))^2`, in which numerator and
/// denominator refer to residual graphs of different sizes. Kept for
/// comparison with [`crr_cover_step`]; the last step (`i = n/k`) is
/// undefined under this indexing.
pub fn crr_cover_step_literal(k: usize, n: u64, i: u64, p: &BigRational) -> Result<BigRational> {
    let ku = k as u64;
    if i == 0 || ku * i > n {
        return Err(Error::InvalidArgument(format!(
            "step index {i} outside 1..={} for n = {n}, k = {k}",
            n / ku.max(1)
        )));
    }
    let ctx = AnalyticContext::with_probability(k, p.clone());
    let m = mean_ordered(&ctx, k, n - ku * i)?;
    Ok(ctx.nesting(k, n - ku * i + ku)? / (&m * &m))
}

pub(super) fn crr_cover_total_with(ctx: &AnalyticContext, k: usize, n: u64) -> Result<BigRational> {
    let ku = k as u64;
    if k == 0 || !n.is_multiple_of(ku) {
        return Err(Error::Config(format!(
            "clique covers need k to divide n (n = {n}, k = {k})"
        )));
    }
    let mut total = BigRational::one();
    let mut ell = n;
    while ell > 0 {
        total *= ctx.crr_clique(k, ell)?;
        ell -= ku;
    }
    Ok(total)
}

/// Product of the per-step ratios over residual sizes `n, n-k, ..., k`.
pub fn crr_cover_total(k: usize, n: u64, p: &BigRational) -> Result<BigRational> {
    AnalyticContext::with_probability(k, p.clone()).crr_cover_total(k, n)
}

/// `(crr_step(k, l, p) - 1) * (l - k + 1)`, the constant `C` that makes
/// `crr_step <= 1 + C / (l - k + 1)` tight at `l`.
pub fn cover_step_scaled_excess(k: usize, ell: u64, p: &BigRational) -> Result<BigRational> {
    let c = crr_cover_step(k, ell, p)?;
    let width = ell as i64 - k as i64 + 1;
    Ok((c - BigRational::one()) * BigRational::from_integer(width.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn nesting_examples() {
        let p = r(2, 9);
        for ell in 1..12u64 {
            let l = ell as i64;
            let ff = |j: u64| ratio(falling_factorial(ell, j));
            let expect = r(l, 1) * ff(2) * &p + r(l, 1) * ff(3) * &p * &p;
            assert_eq!(nesting_closed(2, ell, &p).unwrap(), expect);
        }
        assert_eq!(nesting_closed(2, 3, &r(1, 2)).unwrap(), r(27, 2));
        for k in 2..6 {
            for ell in 0..k as u64 {
                assert!(nesting_closed(k, ell, &r(1, 2)).unwrap().is_zero());
            }
        }
        assert!(nesting_closed(1, 4, &r(1, 2)).is_err());
    }

    #[test]
    fn crr_examples() {
        for n in 2..15 {
            assert_eq!(crr_clique(2, n, &r(1, 1)).unwrap(), r(1, 1));
        }
        assert_eq!(crr_clique(2, 4, &r(1, 2)).unwrap(), r(4, 3));
        assert_eq!(crr_clique(3, 12, &r(1, 2)).unwrap(), r(44055, 27225));
        assert!(matches!(
            crr_clique(3, 2, &r(1, 2)),
            Err(Error::UndefinedRatio(_))
        ));
        assert!(matches!(
            crr_clique(2, 5, &r(0, 1)),
            Err(Error::UndefinedRatio(_))
        ));
        let terms = crr_clique_terms(3, 12, &r(1, 2)).unwrap();
        assert_eq!(
            terms.into_iter().fold(BigRational::zero(), |a, b| a + b),
            r(44055, 27225)
        );
    }

    #[test]
    fn cover_step_examples() {
        for q in [r(1, 2), r(1, 3), r(3, 4)] {
            assert_eq!(crr_cover_step(2, 2, &q).unwrap(), BigRational::one() / &q);
        }
        assert_eq!(crr_cover_total(2, 4, &r(1, 1)).unwrap(), r(1, 1));
        assert!(crr_cover_total(3, 4, &r(1, 2)).is_err());
        let half = r(1, 2);
        let total = crr_cover_total(2, 6, &half).unwrap();
        let prod = crr_cover_step(2, 6, &half).unwrap()
            * crr_cover_step(2, 4, &half).unwrap()
            * crr_cover_step(2, 2, &half).unwrap();
        assert_eq!(total, prod);
    }

    #[test]
    fn literal_indexing() {
        let half = r(1, 2);
        // i = 1 pairs N(k, n) with (n-k)_k.
        let lit = crr_cover_step_literal(2, 8, 1, &half).unwrap();
        let n8 = nesting_closed(2, 8, &half).unwrap();
        let m6 = ratio(falling_factorial(6, 2)) * &half;
        assert_eq!(lit, n8 / (&m6 * &m6));
        assert!(matches!(
            crr_cover_step_literal(2, 8, 4, &half),
            Err(Error::UndefinedRatio(_))
        ));
        assert!(crr_cover_step_literal(2, 8, 5, &half).is_err());
        assert!(crr_cover_step_literal(2, 8, 0, &half).is_err());
    }
}
