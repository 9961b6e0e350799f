use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

/// Stirling numbers of the second kind `S(k, j)` for `0 <= j <= k <= k_max`,
/// built with `S(k+1, j) = j S(k, j) + S(k, j-1)`.
///
/// These are the coefficients of the falling-factorial expansion of the
/// binomial moments.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(k_max: usize) -> Self {
        let mut t = StirlingTable {
            rows: vec![vec![BigUint::one()]],
        };
        t.grow(k_max);
        t
    }

    pub fn k_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Extends the table so that rows up to `k_max` exist.
    pub fn grow(&mut self, k_max: usize) {
        while self.rows.len() <= k_max {
            let prev = self.rows.last().unwrap();
            let k = prev.len();
            let row: Vec<BigUint> = (0..=k)
                .map(|j| {
                    let keep = if j < prev.len() {
                        &prev[j] * j
                    } else {
                        BigUint::zero()
                    };
                    let shift = if j >= 1 {
                        prev[j - 1].clone()
                    } else {
                        BigUint::zero()
                    };
                    keep + shift
                })
                .collect();
            self.rows.push(row);
        }
    }

    /// `S(k, j)`; zero outside `0 <= j <= k <= k_max`.
    pub fn get(&self, k: usize, j: usize) -> BigUint {
        self.rows
            .get(k)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_default()
    }
}

/// `S(k, j)` by inclusion–exclusion:
/// `(1/j!) * sum_{i=0}^{j} (-1)^i C(j, i) (j - i)^k`.
pub fn stirling_closed(k: usize, j: usize) -> BigUint {
    if j > k {
        return BigUint::zero();
    }
    let mut sum = BigInt::zero();
    for i in 0..=j {
        let term = BigInt::from(num_integer::binomial(BigUint::from(j), BigUint::from(i)))
            * Pow::pow(BigInt::from(j - i), k);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let fact: BigInt = (1..=j).map(BigInt::from).product();
    let (q, r) = sum.div_rem(&fact);
    debug_assert!(r.is_zero() && !q.is_negative());
    q.to_biguint().expect("Stirling numbers are non-negative")
}
