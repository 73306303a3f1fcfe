//! Conjectured thresholds for percolation of `C_4` and `K_{r,s}` copies
//! sharing all but one vertex. These come from an unverified branching
//! heuristic and are not theorems.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Threshold of the form `p0 = lambda * n^(-exponent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicThreshold<T> {
    pub lambda: T,
    pub exponent: T,
    pub p0: T,
}

impl<T: Scalar> HeuristicThreshold<T> {
    fn new(lambda: T, exponent: T, n: u64) -> Self {
        Self {
            lambda,
            exponent,
            p0: lambda * T::of_u64(n).powf(-exponent),
        }
    }
}

/// Root of `lambda^4 / 2 + 2 lambda^2 = 1`, i.e. `sqrt(sqrt(6) - 2)`.
pub fn c4_coefficient<T: Scalar>() -> T {
    (T::of(6.0).sqrt() - T::of(2.0)).sqrt()
}

/// `C_4` threshold `p0 = sqrt(sqrt(6) - 2) / sqrt(n)`.
pub fn heuristic_threshold_c4<T: Scalar>(n: u64) -> HeuristicThreshold<T> {
    HeuristicThreshold::new(c4_coefficient(), T::of(0.5), n)
}

/// Mean number of replacement `r`-sets at scale `lambda`:
/// `E[C(Z + r, r)] - 1` with `Z ~ Poisson(lambda^r)`, summed over the Poisson
/// mass until the remaining tail is below `1e-16` of the total.
pub fn krr_offspring_mean<T: Scalar>(r: u32, lambda: T) -> T {
    let mean = lambda.powi(r as i32).as_f64();
    let mut pmf = (-mean).exp();
    let mut binom = 1.0f64; // C(z + r, r) at z = 0
    let mut total = 0.0f64;
    let mut z = 0u64;
    loop {
        let term = pmf * binom;
        total += term;
        z += 1;
        if z as f64 > mean + r as f64 && term < 1e-17 * total.max(1.0) {
            break;
        }
        pmf *= mean / z as f64;
        binom *= (z + r as u64) as f64 / z as f64;
    }
    T::of(total - 1.0)
}

fn check_bipartite_sides(r: u32, s: u32) -> Result<()> {
    if r > s {
        return Err(Error::invalid(format!("K_{{r,s}} needs r <= s, got r={r}, s={s}")));
    }
    if !(2..=6).contains(&r) || !(2..=6).contains(&s) {
        return Err(Error::invalid(format!("K_{{r,s}} sides must lie in [2, 6], got ({r}, {s})")));
    }
    Ok(())
}

/// `K_{r,r}` threshold `lambda n^(-1/r)` where `lambda` solves
/// `E[C(Z + r, r) - 1] = 1`, found by bisection.
pub fn heuristic_threshold_krr<T: Scalar>(r: u32, n: u64) -> Result<HeuristicThreshold<T>> {
    check_bipartite_sides(r, r)?;
    // offspring mean is 0 at lambda = 0 and at least r at lambda = 1
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if krr_offspring_mean::<f64>(r, mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let lambda = T::of(0.5 * (lo + hi));
    Ok(HeuristicThreshold::new(lambda, T::one() / T::of(r as f64), n))
}

/// `K_{r,s}` threshold. For `r < s` this is `lambda n^(-(s+1)/(rs+s))` with
/// `lambda^(rs+s) = s!/r`; for `r = s` it defers to
/// [`heuristic_threshold_krr`].
pub fn heuristic_threshold_krs<T: Scalar>(r: u32, s: u32, n: u64) -> Result<HeuristicThreshold<T>> {
    check_bipartite_sides(r, s)?;
    if r == s {
        return heuristic_threshold_krr(r, n);
    }
    let s_factorial: u64 = (1..=s as u64).product();
    let power = T::of((r * s + s) as f64);
    let lambda = (T::of_u64(s_factorial) / T::of(r as f64)).powf(T::one() / power);
    Ok(HeuristicThreshold::new(lambda, T::of((s + 1) as f64) / power, n))
}
