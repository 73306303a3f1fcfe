//! Binomial coefficients and log-domain monomials in `p`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest binomial value evaluated through exact integer arithmetic.
const EXACT_LIMIT: u128 = 1_000_000_000_000_000;

/// `C(n, k)` when it fits below 10^15, else `None`.
pub fn binomial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > EXACT_LIMIT {
            return None;
        }
    }
    Some(acc)
}

/// `ln C(n, k)`; negative infinity when `k > n`.
pub fn ln_binomial<T: Scalar>(n: u64, k: u64) -> T {
    if let Some(exact) = binomial_exact(n, k) {
        return if exact == 0 {
            T::neg_infinity()
        } else {
            T::of(exact as f64).ln()
        };
    }
    let k = k.min(n - k);
    let mut acc = 0.0f64;
    for i in 0..k {
        acc += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    T::of(acc)
}

pub fn binomial<T: Scalar>(n: u64, k: u64) -> T {
    ln_binomial::<T>(n, k).exp()
}

pub fn pairs(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

pub fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

/// A quantity of the form `coef * p^exponent`, kept in log domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw<T> {
    pub ln_coef: T,
    pub exponent: u64,
}

impl<T: Scalar> PowerLaw<T> {
    pub fn new(ln_coef: T, exponent: u64) -> Self {
        Self { ln_coef, exponent }
    }

    pub fn coefficient(&self) -> T {
        self.ln_coef.exp()
    }

    pub fn eval(&self, p: T) -> T {
        if self.ln_coef == T::neg_infinity() {
            return T::zero();
        }
        if p == T::zero() {
            return if self.exponent == 0 { self.coefficient() } else { T::zero() };
        }
        (self.ln_coef + T::of_u64(self.exponent) * p.ln()).exp()
    }

    /// The `p` at which the quantity equals `target`.
    pub fn solve(&self, target: T) -> Result<T> {
        if self.exponent == 0 || !self.ln_coef.is_finite() {
            return Err(Error::invalid("quantity does not depend on p"));
        }
        if target < T::zero() || !target.is_finite() {
            return Err(Error::invalid(format!("target {target} must be finite and >= 0")));
        }
        if target == T::zero() {
            return Ok(T::zero());
        }
        Ok(((target.ln() - self.ln_coef) / T::of_u64(self.exponent)).exp())
    }
}
