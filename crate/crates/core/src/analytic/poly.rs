use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

/// A sparse polynomial in the edge probability `p` with integer
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PPolynomial {
    terms: BTreeMap<u32, BigInt>,
}

impl PPolynomial {
    pub(crate) const ZERO_CONST: PPolynomial = PPolynomial {
        terms: BTreeMap::new(),
    };

    pub fn zero() -> Self {
        PPolynomial::default()
    }

    pub fn monomial(coef: impl Into<BigInt>, exp: u32) -> Self {
        let mut p = PPolynomial::zero();
        p.add_term(exp, coef.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, BigInt)>>(terms: I) -> Self {
        let mut p = PPolynomial::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: u32, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coefficient(&self, exp: u32) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms in descending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.terms.iter().rev().map(|(e, c)| (*e, c))
    }

    /// `c * p^shift * self`.
    pub fn scaled_shifted(&self, c: &BigInt, shift: u32) -> PPolynomial {
        PPolynomial::from_terms(self.terms.iter().map(|(e, k)| (e + shift, k * c)))
    }

    pub fn evaluate(&self, p: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += BigRational::from_integer(c.clone()) * Pow::pow(p, *e);
        }
        acc
    }

    pub fn evaluate_f64(&self, p: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::INFINITY) * p.powi(*e as i32))
            .sum()
    }
}

impl std::ops::Add<&PPolynomial> for PPolynomial {
    type Output = PPolynomial;

    fn add(mut self, rhs: &PPolynomial) -> PPolynomial {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
        self
    }
}

impl std::ops::Mul for PPolynomial {
    type Output = PPolynomial;

    fn mul(self, rhs: PPolynomial) -> PPolynomial {
        let mut out = PPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

/// `exp:coef` pairs in descending exponent order, space separated; `0` for
/// the zero polynomial.
impl fmt::Display for PPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{e}:{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_zero_coefficients() {
        let p = PPolynomial::monomial(3, 2) + &PPolynomial::monomial(-3, 2);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
        assert_eq!(p.to_string(), "0");
        assert!(PPolynomial::monomial(0, 5).is_zero());
    }

    #[test]
    fn display_and_eval() {
        let p = PPolynomial::monomial(3, 5) + &PPolynomial::monomial(1, 4);
        assert_eq!(p.to_string(), "5:3 4:1");
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(p.evaluate(&half), BigRational::new(5.into(), 32.into()));
        assert!((p.evaluate_f64(0.5) - 5.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn product() {
        // (1 + p)^2 = 1 + 2p + p^2
        let a = PPolynomial::monomial(1, 0) + &PPolynomial::monomial(1, 1);
        let sq = a.clone() * a;
        assert_eq!(sq.to_string(), "2:1 1:2 0:1");
        assert_eq!(
            sq.scaled_shifted(&BigInt::from(2), 3).to_string(),
            "5:2 4:4 3:2"
        );
    }
}
