//! Survival probabilities of the branching processes behind the percolation
//! thresholds.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::combinatorics::binomial_exact;

const MAX_ITERATIONS: usize = 1_000_000;
const BISECTION_STEPS: usize = 300;

/// Parameters of the single-type process: each particle has `m * Z` children
/// with `Z ~ Poisson(lambda / m)` and `m = C(k, ell) - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchingParams<T> {
    pub k: usize,
    pub ell: usize,
    pub lambda: T,
    m: u64,
}

impl<T: Scalar> BranchingParams<T> {
    pub fn new(k: usize, ell: usize, lambda: T) -> Result<Self> {
        if ell < 1 || ell >= k {
            return Err(Error::invalid(format!("ell={ell} outside [1, k-1] for k={k}")));
        }
        check_lambda(lambda)?;
        let c = binomial_exact(k as u64, ell as u64)
            .filter(|&c| c <= u32::MAX as u128)
            .ok_or_else(|| Error::Unsupported(format!("C({k},{ell}) too large")))?;
        Ok(Self {
            k,
            ell,
            lambda,
            m: c as u64 - 1,
        })
    }

    /// Family size `M = C(k, ell) - 1`.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Number of independent processes started, `C(k, ell)`.
    pub fn roots(&self) -> u64 {
        self.m + 1
    }

    pub fn rho(&self) -> T {
        solve_rho(self.lambda, self.m)
    }

    pub fn sigma(&self) -> T {
        let rho = self.rho();
        complement_power(rho, self.roots())
    }
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if !lambda.is_finite() || lambda < T::zero() {
        return Err(Error::invalid(format!("offspring mean {lambda} must be finite and >= 0")));
    }
    Ok(())
}

/// `1 - (1 - x)^e` without cancellation for small `x`.
fn complement_power<T: Scalar>(x: T, e: u64) -> T {
    if x >= T::one() {
        return T::one();
    }
    -(T::of_u64(e) * (-x).ln_1p()).exp_m1()
}

/// The map `rho -> 1 - exp(-(lambda/m)(1 - (1 - rho)^m))`.
fn rho_map<T: Scalar>(lambda: T, m: u64, rho: T) -> T {
    let z = lambda / T::of_u64(m) * complement_power(rho, m);
    -(-z).exp_m1()
}

/// Residual `|rho - f(rho)|` of a candidate fixed point.
pub fn rho_residual<T: Scalar>(lambda: T, m: u64, rho: T) -> T {
    (rho - rho_map(lambda, m, rho)).abs()
}

/// Largest fixed point of [`rho_map`]; exactly zero when `lambda <= 1`.
///
/// Iterates downward from `rho = 1`, which converges monotonically to the
/// largest root since the map is increasing and concave. Falls back to
/// bisection on `rho - f(rho)` when the iteration stalls.
pub(crate) fn solve_rho<T: Scalar>(lambda: T, m: u64) -> T {
    if lambda <= T::one() {
        return T::zero();
    }
    let tol = T::solver_tolerance();
    let mut rho = T::one();
    for _ in 0..MAX_ITERATIONS {
        let next = rho_map(lambda, m, rho);
        if (next - rho).abs() < tol {
            return next;
        }
        rho = next;
    }
    log::debug!("rho iteration stalled at lambda={lambda}; bisecting");
    let (mut lo, mut hi) = (T::of(1e-15), rho);
    for _ in 0..BISECTION_STEPS {
        let mid = (lo + hi) / T::of(2.0);
        if mid - rho_map(lambda, m, mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < tol * T::of(1e-3) {
            break;
        }
    }
    (lo + hi) / T::of(2.0)
}

/// Largest root `rho` of `rho = 1 - exp(-(lambda/M)(1 - (1 - rho)^M))`,
/// `M = C(k, ell) - 1`.
pub fn survival_rho<T: Scalar>(k: usize, ell: usize, lambda: T) -> Result<T> {
    Ok(BranchingParams::new(k, ell, lambda)?.rho())
}

/// Survival probability `1 - (1 - rho)^C(k, ell)` of `C(k, ell)` independent
/// copies of the single-type process.
pub fn survival_sigma<T: Scalar>(k: usize, ell: usize, lambda: T) -> Result<T> {
    Ok(BranchingParams::new(k, ell, lambda)?.sigma())
}

/// Survival probability of the Poisson(`lambda`) Galton-Watson process: the
/// largest root of `s = 1 - exp(-lambda s)`.
pub fn survival_sigma0<T: Scalar>(lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    Ok(solve_rho(lambda, 1))
}

/// Survival probability of the multi-type Poisson process started with one
/// particle of each type.
///
/// A particle of type `A` draws `Z_B ~ Poisson(m[B][A] * scale)` for every
/// type `B` and then has `sum_{B != A'} Z_B` children of each type `A'`.
pub fn survival_multitype<T: Scalar>(m: &[Vec<u64>], scale: T) -> Result<T> {
    let t = m.len();
    if m.iter().any(|row| row.len() != t) {
        return Err(Error::invalid("type matrix must be square"));
    }
    check_lambda(scale)?;
    if t == 0 {
        return Ok(T::zero());
    }
    let tol = T::solver_tolerance();
    // Extinction probabilities rise monotonically from 0 to the smallest
    // fixed point.
    let mut q = vec![T::zero(); t];
    let mut next = vec![T::zero(); t];
    for _ in 0..MAX_ITERATIONS {
        let total_ln: T = q.iter().fold(T::zero(), |acc, &x| acc + x.ln());
        for (a, slot) in next.iter_mut().enumerate() {
            let mut exponent = T::zero();
            for (b, row) in m.iter().enumerate() {
                if row[a] == 0 {
                    continue;
                }
                // product of q over every type except b
                let others = if q[b] > T::zero() {
                    (total_ln - q[b].ln()).exp()
                } else {
                    q.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != b)
                        .fold(T::one(), |acc, (_, &x)| acc * x)
                };
                exponent = exponent + T::of_u64(row[a]) * scale * (T::one() - others);
            }
            *slot = (-exponent).exp();
        }
        let delta = q
            .iter()
            .zip(&next)
            .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()));
        std::mem::swap(&mut q, &mut next);
        if delta < tol * T::of(1e-2) {
            break;
        }
    }
    let extinct = q.iter().fold(T::one(), |acc, &x| acc * x);
    Ok((T::one() - extinct).max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_and_subcritical_are_zero() {
        for lambda in [0.0, 0.5, 1.0] {
            assert_eq!(survival_sigma(3, 2, lambda).unwrap(), 0.0);
            assert_eq!(survival_sigma(5, 2, lambda).unwrap(), 0.0);
            assert_eq!(survival_sigma0(lambda).unwrap(), 0.0);
        }
    }

    #[test]
    fn reference_values() {
        // fixed-point iteration and a 10^7-trial simulation both give these
        let rho = survival_rho(3, 2, 2.0f64).unwrap();
        assert!((rho - 0.549_236_347_982_692_9).abs() < 1e-10);
        let sigma = survival_sigma(3, 2, 2.0f64).unwrap();
        assert!((sigma - 0.908_410_293_682_206_5).abs() < 1e-10);
        let s0 = survival_sigma0(2.0f64).unwrap();
        assert!((s0 - 0.796_812_130_020_020_2).abs() < 1e-10);
    }

    #[test]
    fn residual_below_tolerance() {
        for &(k, ell) in &[(3, 2), (3, 1), (4, 2), (5, 4), (6, 3)] {
            for lambda in [1.001, 1.01, 1.2, 1.5, 2.0, 5.0, 100.0] {
                let p = BranchingParams::new(k, ell, lambda).unwrap();
                let rho = p.rho();
                assert!(rho > 0.0);
                assert!(rho_residual(lambda, p.m(), rho) < 1e-12, "k={k} ell={ell} lambda={lambda}");
            }
        }
    }

    #[test]
    fn near_critical_uses_fallback_correctly() {
        let rho = solve_rho(1.0 + 1e-7, 2);
        assert!(rho > 0.0 && rho < 1e-5);
        assert!(rho_residual(1.0 + 1e-7, 2, rho) < 1e-12);
    }

    #[test]
    fn monotone_on_grid() {
        let grid = [0.0, 0.5, 1.0, 1.01, 1.5, 2.0, 5.0, 100.0];
        let values: Vec<f64> = grid.iter().map(|&l| survival_sigma(3, 2, l).unwrap()).collect();
        assert!(values[..3].iter().all(|&v| v == 0.0));
        assert!(values[3..].windows(2).all(|w| w[0] < w[1]));
        assert!(values[7] > 0.999);
        let s0: Vec<f64> = grid[3..].iter().map(|&l| survival_sigma0(l).unwrap()).collect();
        assert!(s0.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_precision() {
        let sigma = survival_sigma(3, 2, 2.0f32).unwrap();
        assert!((sigma - 0.908_410_3).abs() < 1e-5);
    }

    #[test]
    fn invalid_parameters() {
        assert!(survival_sigma(3, 3, 2.0).is_err());
        assert!(survival_sigma(3, 0, 2.0).is_err());
        assert!(survival_sigma(3, 2, -1.0).is_err());
        assert!(survival_sigma0(f64::NAN).is_err());
    }

    #[test]
    fn multitype_reduces_to_single_type() {
        // transitive K_3, ell = 2: every entry (k - ell)! = 1
        let m = vec![vec![1u64; 3]; 3];
        for mu in [0.5f64, 1.5, 2.0, 3.0] {
            // mean offspring of the single-type process is 2 * 3 * scale
            let scale = mu / 6.0;
            let multi = survival_multitype(&m, scale).unwrap();
            let single = survival_sigma(3, 2, mu).unwrap();
            assert!((multi - single).abs() < 1e-9, "mu={mu}: {multi} vs {single}");
        }
    }
}
