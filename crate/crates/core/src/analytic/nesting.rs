//! The coefficient polynomials `f_{k,j}(p)` of the k-nesting expansion
//! `N(k, l, p) = sum_{j=k}^{2k-1} l (l)_j f_{k,j}(p)`.

use num_bigint::BigInt;

use super::poly::PPolynomial;

/// `f_{k,j}` for `2 <= k <= k_max`, stored densely over `0 <= j <= 2k-1`.
///
/// Seeded with `f_{2,2} = p`, `f_{2,3} = p^2` and extended by
/// `f_{k+1,j} = p^(j-1) ((j-1) f_{k,j-1} + f_{k,j-2})`.
#[derive(Debug, Clone)]
pub struct FTable {
    // rows[0] is k = 2
    rows: Vec<Vec<PPolynomial>>,
}

impl FTable {
    pub fn new(k_max: usize) -> Self {
        let base = vec![
            PPolynomial::zero(),
            PPolynomial::zero(),
            PPolynomial::monomial(1, 1),
            PPolynomial::monomial(1, 2),
        ];
        let mut t = FTable { rows: vec![base] };
        t.grow(k_max);
        t
    }

    pub fn k_max(&self) -> usize {
        self.rows.len() + 1
    }

    pub fn grow(&mut self, k_max: usize) {
        while self.k_max() < k_max {
            let prev = self.rows.last().unwrap();
            let k = self.k_max();
            let at = |j: usize| prev.get(j).cloned().unwrap_or_default();
            let row = (0..=2 * k + 1)
                .map(|j| {
                    if j < k + 1 {
                        return PPolynomial::zero();
                    }
                    let shift = (j - 1) as u32;
                    at(j - 1).scaled_shifted(&BigInt::from(j - 1), shift)
                        + &at(j - 2).scaled_shifted(&BigInt::from(1), shift)
                })
                .collect();
            self.rows.push(row);
        }
    }

    /// `f_{k,j}`; the zero polynomial outside `k <= j <= 2k-1` and for
    /// `k < 2`. Panics if `k` exceeds the table.
    pub fn get(&self, k: usize, j: usize) -> &PPolynomial {
        static ZERO: PPolynomial = PPolynomial::ZERO_CONST;
        if k < 2 {
            return &ZERO;
        }
        assert!(
            k <= self.k_max(),
            "f-table built for k <= {}, asked for {k}",
            self.k_max()
        );
        self.rows[k - 2].get(j).unwrap_or(&ZERO)
    }
}

/// `f_{k,j}(p)` as an exact polynomial.
pub fn f_polynomial(k: usize, j: usize) -> PPolynomial {
    FTable::new(k.max(2)).get(k, j).clone()
}
