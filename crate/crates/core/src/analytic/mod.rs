//! Exact analytics for the clique and cover estimators: Stirling
//! coefficients, binomial moments, the k-nesting second moment, critical
//! ratios of averages, and the bound functions used to control them.
//!
//! Identities are evaluated in exact rational arithmetic. Only the
//! diagnostic bounds in [`bounds`] use `f64`.

pub mod bounds;
mod crr;
mod moments;
mod nesting;
mod poly;
mod stirling;

pub use bounds::{
    f_upper_bound_check, f_upper_bound_sides, g_argmax, g_exponent, g_stationary_point, h_bound,
};
pub use crr::{
    cover_step_scaled_excess, crr_clique, crr_clique_terms, crr_cover_step, crr_cover_step_literal,
    crr_cover_total, nesting_closed,
};
pub use moments::{
    binomial_moment_closed, factorial_moment_identity_check, factorial_moment_sides,
    falling_factorial,
};
pub use nesting::{f_polynomial, FTable};
pub use poly::PPolynomial;
pub use stirling::{stirling_closed, StirlingTable};

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Memoised analytic tables, optionally bound to an edge probability.
///
/// Tables grow explicitly through [`grow`](Self::grow); queries take `&self`
/// so a finished context can be shared between threads.
#[derive(Debug, Clone)]
pub struct AnalyticContext {
    stirling: StirlingTable,
    f: FTable,
    bound: Option<Bound>,
}

#[derive(Debug, Clone)]
struct Bound {
    p: BigRational,
    // f_values[k - 2][j] = f_{k,j}(p)
    f_values: Vec<Vec<BigRational>>,
}

impl AnalyticContext {
    pub fn new(k_max: usize) -> Self {
        AnalyticContext {
            stirling: StirlingTable::new(k_max),
            f: FTable::new(k_max.max(2)),
            bound: None,
        }
    }

    /// A context whose model-dependent queries use edge probability `p`.
    pub fn with_probability(k_max: usize, p: BigRational) -> Self {
        let mut ctx = AnalyticContext::new(k_max);
        ctx.bound = Some(Bound {
            p,
            f_values: Vec::new(),
        });
        ctx.evaluate_f();
        ctx
    }

    pub fn k_max(&self) -> usize {
        self.stirling.k_max().min(self.f.k_max())
    }

    pub fn probability(&self) -> Option<&BigRational> {
        self.bound.as_ref().map(|b| &b.p)
    }

    pub fn grow(&mut self, k_max: usize) {
        self.stirling.grow(k_max);
        self.f.grow(k_max.max(2));
        self.evaluate_f();
    }

    fn evaluate_f(&mut self) {
        let Some(bound) = self.bound.as_mut() else {
            return;
        };
        while bound.f_values.len() + 2 <= self.f.k_max() {
            let k = bound.f_values.len() + 2;
            let row = (0..2 * k)
                .map(|j| self.f.get(k, j).evaluate(&bound.p))
                .collect();
            bound.f_values.push(row);
        }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "analytic context built for k <= {}, asked for k = {k}",
                self.k_max()
            )));
        }
        Ok(())
    }

    fn bound(&self) -> Result<&Bound> {
        self.bound
            .as_ref()
            .ok_or_else(|| Error::Config("analytic context has no edge probability".into()))
    }

    pub fn stirling(&self, k: usize, j: usize) -> Result<BigUint> {
        self.check_k(k)?;
        Ok(self.stirling.get(k, j))
    }

    pub fn f_polynomial(&self, k: usize, j: usize) -> Result<&PPolynomial> {
        self.check_k(k)?;
        Ok(self.f.get(k, j))
    }

    /// `f_{k,j}(p)` at the bound probability.
    pub fn f_value(&self, k: usize, j: usize) -> Result<BigRational> {
        self.check_k(k)?;
        let b = self.bound()?;
        if k < 2 {
            return Ok(BigRational::default());
        }
        Ok(b.f_values[k - 2].get(j).cloned().unwrap_or_default())
    }

    pub fn binomial_moment(&self, n: u64, k: usize) -> Result<BigRational> {
        self.check_k(k)?;
        Ok(moments::binomial_moment_with(
            &self.stirling,
            n,
            k,
            &self.bound()?.p,
        ))
    }

    /// `N(k, l, p)`.
    pub fn nesting(&self, k: usize, ell: u64) -> Result<BigRational> {
        crr::nesting_with(self, k, ell)
    }

    pub fn crr_clique(&self, k: usize, n: u64) -> Result<BigRational> {
        crr::crr_clique_with(self, k, n)
    }

    pub fn crr_cover_total(&self, k: usize, n: u64) -> Result<BigRational> {
        crr::crr_cover_total_with(self, k, n)
    }
}
