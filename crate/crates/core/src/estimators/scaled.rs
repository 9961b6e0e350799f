use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A non-negative quantity that may be far outside the range of `f64`.
///
/// Values are carried as a natural logarithm by default, or as an exact
/// rational in verification mode. `Zero` is the only representation of 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum ScaledValue {
    #[default]
    Zero,
    /// Natural logarithm of the value; always finite.
    Log(f64),
    /// Exact value; always strictly positive.
    Exact(BigRational),
}

pub(crate) fn ln_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rational(r: &BigRational) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// `ln(sum exp(x_i))` with the maximum factored out and the remaining
/// terms added pairwise.
pub(crate) fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let shifted: Vec<f64> = logs.iter().map(|x| (x - m).exp()).collect();
    m + pairwise_sum(&shifted).ln()
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

impl ScaledValue {
    pub fn from_ln(ln: f64) -> Self {
        assert!(
            !ln.is_nan() && ln != f64::INFINITY,
            "log magnitude must be finite, got {ln}"
        );
        if ln == f64::NEG_INFINITY {
            ScaledValue::Zero
        } else {
            ScaledValue::Log(ln)
        }
    }

    pub fn from_f64(v: f64) -> Self {
        assert!(v >= 0.0, "ScaledValue must be non-negative, got {v}");
        ScaledValue::from_ln(v.ln())
    }

    pub fn from_rational(r: BigRational) -> Self {
        assert!(!r.is_negative(), "ScaledValue must be non-negative");
        if r.is_zero() {
            ScaledValue::Zero
        } else {
            ScaledValue::Exact(r)
        }
    }

    pub fn from_integer(v: BigUint) -> Self {
        ScaledValue::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ScaledValue::Zero)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ScaledValue::Log(_))
    }

    /// The exact value, when the representation is exact.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            ScaledValue::Zero => Some(BigRational::zero()),
            ScaledValue::Exact(r) => Some(r.clone()),
            ScaledValue::Log(_) => None,
        }
    }

    /// Natural logarithm; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        match self {
            ScaledValue::Zero => f64::NEG_INFINITY,
            ScaledValue::Log(l) => *l,
            ScaledValue::Exact(r) => ln_rational(r),
        }
    }

    pub fn log10(&self) -> f64 {
        self.ln() / std::f64::consts::LN_10
    }

    /// Nearest `f64`; may overflow to infinity.
    pub fn to_f64(&self) -> f64 {
        match self {
            ScaledValue::Zero => 0.0,
            ScaledValue::Log(l) => l.exp(),
            ScaledValue::Exact(r) => r
                .to_f64()
                .filter(|v| v.is_finite())
                .unwrap_or_else(|| ln_rational(r).exp()),
        }
    }

    /// Drops to the log representation.
    pub fn to_log(&self) -> ScaledValue {
        ScaledValue::from_ln(self.ln())
    }

    pub fn mul(&self, other: &ScaledValue) -> ScaledValue {
        match (self, other) {
            (ScaledValue::Zero, _) | (_, ScaledValue::Zero) => ScaledValue::Zero,
            (ScaledValue::Exact(a), ScaledValue::Exact(b)) => ScaledValue::Exact(a * b),
            _ => ScaledValue::from_ln(self.ln() + other.ln()),
        }
    }

    pub fn square(&self) -> ScaledValue {
        self.mul(self)
    }

    pub fn div_count(&self, count: u64) -> ScaledValue {
        assert!(count > 0);
        match self {
            ScaledValue::Zero => ScaledValue::Zero,
            ScaledValue::Exact(r) => {
                ScaledValue::Exact(r / BigRational::from_integer(count.into()))
            }
            ScaledValue::Log(l) => ScaledValue::Log(l - (count as f64).ln()),
        }
    }

    /// Sum of `values`. Exact when every input is exact; otherwise
    /// log-sum-exp, which is independent of input order up to floating-point
    /// rounding of the pairwise reduction.
    pub fn sum(values: &[ScaledValue]) -> ScaledValue {
        if values.iter().all(ScaledValue::is_exact) {
            let mut acc = BigRational::zero();
            for v in values {
                if let ScaledValue::Exact(r) = v {
                    acc += r;
                }
            }
            return ScaledValue::from_rational(acc);
        }
        let logs: Vec<f64> = values
            .iter()
            .filter(|v| !v.is_zero())
            .map(ScaledValue::ln)
            .collect();
        ScaledValue::from_ln(log_sum_exp(&logs))
    }

    pub fn mean(values: &[ScaledValue]) -> ScaledValue {
        ScaledValue::sum(values).div_count(values.len() as u64)
    }

    /// Total order on values; exact when both sides are exact.
    pub fn cmp_value(&self, other: &ScaledValue) -> Ordering {
        match (self, other) {
            (ScaledValue::Exact(a), ScaledValue::Exact(b)) => a.cmp(b),
            _ => self.ln().total_cmp(&other.ln()),
        }
    }
}

impl From<u64> for ScaledValue {
    fn from(v: u64) -> Self {
        ScaledValue::from_integer(BigUint::from(v))
    }
}

/// Exact values print as `num/den` (or an integer), log values as their
/// rounded decimal.
impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaledValue::Zero => write!(f, "0"),
            ScaledValue::Exact(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            ScaledValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ScaledValue::Log(l) if *l < 700.0 => write!(f, "{}", l.exp()),
            ScaledValue::Log(l) => write!(f, "1e{:.6}", l / std::f64::consts::LN_10),
        }
    }
}
