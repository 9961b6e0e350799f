//! Closed-form binomial moments and the factorial-moment identity.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::stirling::StirlingTable;

/// `(n)_j = n (n-1) ... (n-j+1)`; zero when `j > n`, one when `j = 0`.
pub fn falling_factorial(n: u64, j: u64) -> BigUint {
    if j > n {
        return BigUint::zero();
    }
    (n - j + 1..=n).map(BigUint::from).product()
}

pub(crate) fn ratio(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `E[X^k]` for `X ~ Binomial(n, p)` as `sum_{j=1}^{k} S(k, j) p^j (n)_j`.
/// `k = 0` gives 1.
pub fn binomial_moment_closed(n: u64, k: usize, p: &BigRational) -> BigRational {
    binomial_moment_with(&StirlingTable::new(k), n, k, p)
}

pub(crate) fn binomial_moment_with(
    table: &StirlingTable,
    n: u64,
    k: usize,
    p: &BigRational,
) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let mut sum = BigRational::zero();
    let mut pj = BigRational::one();
    for j in 1..=k {
        pj *= p;
        let s = table.get(k, j);
        if s.is_zero() {
            continue;
        }
        sum += ratio(s * falling_factorial(n, j as u64)) * &pj;
    }
    sum
}

/// Both sides of
/// `sum_{m=j}^{n} m (m)_j C(n, m) p^m (1-p)^(n-m) = j (n)_j p^j + (n)_{j+1} p^(j+1)`.
pub fn factorial_moment_sides(n: u64, j: u64, p: &BigRational) -> (BigRational, BigRational) {
    let q = BigRational::one() - p;
    let mut lhs = BigRational::zero();
    for m in j..=n {
        let w = BigUint::from(m)
            * falling_factorial(m, j)
            * num_integer::binomial(BigUint::from(n), BigUint::from(m));
        lhs += ratio(w) * Pow::pow(p, m) * Pow::pow(&q, n - m);
    }
    let rhs = ratio(BigUint::from(j) * falling_factorial(n, j)) * Pow::pow(p, j)
        + ratio(falling_factorial(n, j + 1)) * Pow::pow(p, j + 1);
    (lhs, rhs)
}

pub fn factorial_moment_identity_check(n: u64, j: u64, p: &BigRational) -> bool {
    let (lhs, rhs) = factorial_moment_sides(n, j, p);
    lhs == rhs
}
