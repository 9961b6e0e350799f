use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// An edge probability held as a reduced fraction `num/den` with
/// `0 <= num <= den`.
///
/// Keeping the value rational lets graph generation flip exact Bernoulli
/// coins and lets the analytic engine evaluate identities without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeProb {
    num: u64,
    den: u64,
}

impl EdgeProb {
    pub const ZERO: EdgeProb = EdgeProb { num: 0, den: 1 };
    pub const ONE: EdgeProb = EdgeProb { num: 1, den: 1 };
    pub const HALF: EdgeProb = EdgeProb { num: 1, den: 2 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument(
                "probability denominator is zero".into(),
            ));
        }
        if num > den {
            return Err(Error::InvalidArgument(format!(
                "probability {num}/{den} exceeds 1"
            )));
        }
        let g = num.gcd(&den);
        Ok(EdgeProb {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// `1 - p`, the edge probability of the complement model.
    pub fn complement(&self) -> EdgeProb {
        EdgeProb {
            num: self.den - self.num,
            den: self.den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl fmt::Display for EdgeProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accepts `a/b`, an integer, or a finite decimal such as `0.75`.
impl FromStr for EdgeProb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse probability {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            return EdgeProb::new(a, b);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let den = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad())?;
            let num = int
                .checked_mul(den)
                .and_then(|x| x.checked_add(frac))
                .ok_or_else(bad)?;
            return EdgeProb::new(num, den);
        }
        let v: u64 = s.parse().map_err(|_| bad())?;
        EdgeProb::new(v, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("1/2".parse::<EdgeProb>().unwrap(), EdgeProb::HALF);
        assert_eq!("0.5".parse::<EdgeProb>().unwrap(), EdgeProb::HALF);
        assert_eq!(
            ".75".parse::<EdgeProb>().unwrap(),
            EdgeProb::new(3, 4).unwrap()
        );
        assert_eq!("1".parse::<EdgeProb>().unwrap(), EdgeProb::ONE);
        assert_eq!("0".parse::<EdgeProb>().unwrap(), EdgeProb::ZERO);
        assert_eq!("6/8".parse::<EdgeProb>().unwrap().to_string(), "3/4");
    }

    #[test]
    fn rejects_out_of_range() {
        assert!("3/2".parse::<EdgeProb>().is_err());
        assert!("1.5".parse::<EdgeProb>().is_err());
        assert!("1/0".parse::<EdgeProb>().is_err());
        assert!("-0.1".parse::<EdgeProb>().is_err());
        assert!("abc".parse::<EdgeProb>().is_err());
    }

    #[test]
    fn complement_sums_to_one() {
        let p = EdgeProb::new(1, 3).unwrap();
        assert_eq!(p.complement(), EdgeProb::new(2, 3).unwrap());
        assert_eq!(
            p.to_rational() + p.complement().to_rational(),
            EdgeProb::ONE.to_rational()
        );
    }
}
