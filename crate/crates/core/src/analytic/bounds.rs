//! Upper-bound functions for the critical-ratio terms. These are
//! diagnostics over the reals; only [`f_upper_bound_check`] is exact.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Pow;

use super::moments::ratio;
use super::nesting::FTable;
use crate::error::{Error, Result};

fn choose2(k: usize) -> u32 {
    (k * k.saturating_sub(1) / 2) as u32
}

/// Bound on the `i`-th critical-ratio term for a residual graph on `ell`
/// vertices:
/// `((l-k)/(l-1))^(k-i-1) * (k^2/(l-k+1) * (1/p)^(k-(i+1)/2))^i`.
pub fn h_bound(k: usize, i: usize, ell: f64, p: f64) -> f64 {
    let kf = k as f64;
    let shrink = ((ell - kf) / (ell - 1.0)).powi((k - i - 1) as i32);
    let grow = kf * kf / (ell - kf + 1.0) * (1.0 / p).powf(kf - (i as f64 + 1.0) / 2.0);
    shrink * grow.powi(i as i32)
}

/// `(f_{k,2k-i-1}(p), k^(2i) p^(C(k,2)+C(k-i,2)))`.
pub fn f_upper_bound_sides(
    k: usize,
    i: usize,
    p: &BigRational,
) -> Result<(BigRational, BigRational)> {
    if k < 2 || i >= k {
        return Err(Error::InvalidArgument(format!(
            "bound needs k >= 2 and 0 <= i < k (k = {k}, i = {i})"
        )));
    }
    let f = FTable::new(k).get(k, 2 * k - i - 1).evaluate(p);
    let bound =
        ratio(Pow::pow(BigUint::from(k), 2 * i as u32)) * Pow::pow(p, choose2(k) + choose2(k - i));
    Ok((f, bound))
}

/// Whether `f_{k,2k-i-1}(p) <= k^(2i) p^(C(k,2)+C(k-i,2))`, exactly.
pub fn f_upper_bound_check(k: usize, i: usize, p: &BigRational) -> Result<bool> {
    let (f, bound) = f_upper_bound_sides(k, i, p)?;
    Ok(f <= bound)
}

fn log_base(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 < p < 1, got {p}")));
    }
    Ok((1.0 / p).ln())
}

/// The exponent `g(i)` with `h(i) <= (1/p)^g(i)` when `k = (1+eps_n) log_{1/p} n`:
/// `g(i) = 2i log k - i log(n-k+1) + k i - i(i+1)/2`, logarithms base `1/p`.
pub fn g_exponent(n: f64, i: f64, eps_n: f64, p: f64) -> Result<f64> {
    let lb = log_base(p)?;
    let k = (1.0 + eps_n) * n.ln() / lb;
    Ok(2.0 * i * k.ln() / lb - i * (n - k + 1.0).ln() / lb + k * i - i * (i + 1.0) / 2.0)
}

/// `2 log log n + eps_n log n` (base `1/p`), the approximate maximiser of
/// [`g_exponent`] in `i`.
pub fn g_stationary_point(n: f64, eps_n: f64, p: f64) -> Result<f64> {
    let lb = log_base(p)?;
    let logn = n.ln() / lb;
    Ok(2.0 * logn.ln() / lb + eps_n * logn)
}

/// Integer maximiser of `g(i)` over `0 <= i <= k-1`, with `k` rounded down.
pub fn g_argmax(n: f64, eps_n: f64, p: f64) -> Result<(usize, f64)> {
    let lb = log_base(p)?;
    let k = ((1.0 + eps_n) * n.ln() / lb).floor() as usize;
    let mut best = (0usize, g_exponent(n, 0.0, eps_n, p)?);
    for i in 1..k.max(1) {
        let v = g_exponent(n, i as f64, eps_n, p)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::crr_clique_terms;
    use num_traits::ToPrimitive;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn h_at_zero() {
        for (k, ell) in [(3usize, 20.0f64), (5, 40.0), (8, 100.0)] {
            let expect = ((ell - k as f64) / (ell - 1.0)).powi(k as i32 - 1);
            assert!((h_bound(k, 0, ell, 0.5) - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn f_bound_examples() {
        let (f, b) = f_upper_bound_sides(3, 1, &r(1, 2)).unwrap();
        assert_eq!(f, r(5, 32));
        assert_eq!(b, r(9, 16));
        assert!(f_upper_bound_check(3, 1, &r(1, 2)).unwrap());
        for k in 2..8 {
            let (f, b) = f_upper_bound_sides(k, 0, &r(2, 3)).unwrap();
            assert_eq!(f, b);
        }
        assert!(f_upper_bound_check(1, 0, &r(1, 2)).is_err());
        assert!(f_upper_bound_check(3, 3, &r(1, 2)).is_err());
    }

    #[test]
    fn terms_are_bounded_by_h() {
        for &(k, n) in &[(3usize, 12u64), (4, 20), (5, 40), (6, 64)] {
            for p in [r(1, 2), r(3, 4)] {
                let pf = p.to_f64().unwrap();
                let terms = crr_clique_terms(k, n, &p).unwrap();
                for (i, t) in terms.iter().enumerate() {
                    let h = h_bound(k, i, n as f64, pf);
                    assert!(t.to_f64().unwrap() <= h * (1.0 + 1e-9), "k={k} n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn g_matches_h_growth_factor() {
        // With k integral, the second factor of h(i) equals (1/p)^g(i).
        let p = 0.5f64;
        for n in [64.0f64, 1024.0, 65536.0] {
            let k = (n.ln() / (1.0 / p).ln()).round();
            for i in 0..k as usize {
                let i_f = i as f64;
                let lhs =
                    (k * k / (n - k + 1.0) * (1.0 / p).powf(k - (i_f + 1.0) / 2.0)).powi(i as i32);
                let rhs = (1.0 / p).powf(g_exponent(n, i_f, 0.0, p).unwrap());
                assert!((lhs - rhs).abs() <= 1e-9 * rhs, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn g_shape() {
        let n = (1u64 << 20) as f64;
        assert_eq!(g_exponent(n, 0.0, 0.0, 0.5).unwrap(), 0.0);
        assert!(g_exponent(n, 10.0, 0.0, 0.5).unwrap().is_finite());
        let (arg, _) = g_argmax(n, 0.0, 0.5).unwrap();
        let stat = g_stationary_point(n, 0.0, 0.5).unwrap();
        assert!((arg as f64 - stat).abs() <= 2.0, "argmax {arg} vs {stat}");
        for i in arg..19 {
            let a = g_exponent(n, i as f64, 0.0, 0.5).unwrap();
            let b = g_exponent(n, i as f64 + 1.0, 0.0, 0.5).unwrap();
            assert!(b < a);
        }
        assert!(g_exponent(n, 1.0, 0.0, 1.0).is_err());
        assert!(g_exponent(n, 1.0, 0.0, 0.0).is_err());
    }
}
