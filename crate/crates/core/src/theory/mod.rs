//! Closed-form thresholds, survival probabilities and branching-process
//! bookkeeping for the percolation variants.
//!
//! Every mean-offspring quantity here has the form `coef * p^e`; the
//! coefficients are evaluated in log domain so that large `n` neither
//! overflows nor underflows.

pub mod branching;
pub mod combinatorics;
pub mod heuristics;
pub mod multitype;
pub mod spectral;
pub mod survival;

use serde::Serialize;

use crate::cliques::OrientationSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use combinatorics::{factorial, ln_binomial, pairs, PowerLaw};

pub use branching::{branching_mc, BranchingProcess, SurvivalEstimate};
pub use heuristics::{
    heuristic_threshold_c4, heuristic_threshold_krr, heuristic_threshold_krs, HeuristicThreshold,
};
pub use multitype::{orientation_type_matrix, MultiTypeModel};
pub use spectral::{spectral_radius, Matrix};
pub use survival::{
    survival_multitype, survival_rho, survival_sigma, survival_sigma0, BranchingParams,
};

fn check_overlap(k: usize, ell: usize) -> Result<()> {
    if k < 2 || ell < 1 || ell >= k {
        return Err(Error::invalid(format!("need k >= 2 and 1 <= ell <= k-1, got k={k}, ell={ell}")));
    }
    Ok(())
}

fn check_p<T: Scalar>(p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn ln_of<T: Scalar>(v: u64) -> T {
    T::of_u64(v).ln()
}

/// `(C(k,ell) - 1) C(n, k-ell) p^(C(k,2) - C(ell,2))` as a law in `p`.
pub fn mu_law<T: Scalar>(n: u64, k: usize, ell: usize) -> Result<PowerLaw<T>> {
    check_overlap(k, ell)?;
    let (k64, l64) = (k as u64, ell as u64);
    let family = combinatorics::binomial_exact(k64, l64).unwrap_or(u128::MAX) as u64 - 1;
    Ok(PowerLaw::new(
        ln_of::<T>(family) + ln_binomial(n, k64 - l64),
        pairs(k64) - pairs(l64),
    ))
}

/// Expected number of new `K_ell`s reached from one `K_ell` in `G(n, p)`.
pub fn mu<T: Scalar>(n: u64, p: T, k: usize, ell: usize) -> Result<T> {
    check_p(p)?;
    Ok(mu_law(n, k, ell)?.eval(p))
}

/// `mu` multiplied by `k!/ell!`, the number of linear orders extending a
/// fixed order on `ell` of the `k` vertices.
pub fn mu_directed_law<T: Scalar>(n: u64, k: usize, ell: usize) -> Result<PowerLaw<T>> {
    let base = mu_law::<T>(n, k, ell)?;
    let orders = ln_of::<T>(factorial(k as u64)) - ln_of::<T>(factorial(ell as u64));
    Ok(PowerLaw::new(base.ln_coef + orders, base.exponent))
}

pub fn mu_directed<T: Scalar>(n: u64, p: T, k: usize, ell: usize) -> Result<T> {
    check_p(p)?;
    Ok(mu_directed_law(n, k, ell)?.eval(p))
}

fn check_cross_edges(k: usize, ell: usize) -> Result<()> {
    if k < 2 || ell < 1 || ell > k * k {
        return Err(Error::invalid(format!("need 1 <= ell <= k^2, got k={k}, ell={ell}")));
    }
    Ok(())
}

/// `C(n, k) C(k^2, ell) p^(C(k,2) + ell)` as a law in `p`.
pub fn mu_prime_law<T: Scalar>(n: u64, k: usize, ell: usize) -> Result<PowerLaw<T>> {
    check_cross_edges(k, ell)?;
    let k64 = k as u64;
    Ok(PowerLaw::new(
        ln_binomial::<T>(n, k64) + ln_binomial::<T>(k64 * k64, ell as u64),
        pairs(k64) + ell as u64,
    ))
}

/// Mean offspring for cliques joined by at least `ell` cross edges.
pub fn mu_prime<T: Scalar>(n: u64, p: T, k: usize, ell: usize) -> Result<T> {
    check_p(p)?;
    Ok(mu_prime_law(n, k, ell)?.eval(p))
}

/// Expected number of `K_k` copies in `G(n, p)`.
pub fn nu<T: Scalar>(n: u64, p: T, k: usize) -> Result<T> {
    check_p(p)?;
    let k64 = k as u64;
    Ok(PowerLaw::new(ln_binomial::<T>(n, k64), pairs(k64)).eval(p))
}

/// Expected number of copies of the orientation `h` in the random digraph.
pub fn nu_oriented<T: Scalar>(n: u64, p: T, h: &OrientationSpec) -> Result<T> {
    check_p(p)?;
    let k64 = h.k() as u64;
    let labelings = ln_of::<T>(factorial(k64)) - ln_of::<T>(h.automorphism_count());
    Ok(PowerLaw::new(ln_binomial::<T>(n, k64) + labelings, pairs(k64)).eval(p))
}

/// Adjacency rule whose threshold is being computed.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdModel {
    /// `k`-cliques sharing at least `ell` vertices.
    Shared,
    /// Transitively oriented cliques in the random digraph.
    OrientedTransitive,
    /// Copies of an arbitrary orientation of `K_k`.
    Oriented(OrientationSpec),
    /// Vertex-disjoint `k`-cliques joined by at least `ell` edges.
    EdgeJoined,
}

impl ThresholdModel {
    pub fn name(&self) -> &'static str {
        match self {
            ThresholdModel::Shared => "shared",
            ThresholdModel::OrientedTransitive => "oriented-transitive",
            ThresholdModel::Oriented(_) => "oriented",
            ThresholdModel::EdgeJoined => "edge-joined",
        }
    }

    /// The model's mean-offspring parameter as a law in `p`.
    pub fn growth_law<T: Scalar>(&self, n: u64, k: usize, ell: usize) -> Result<PowerLaw<T>> {
        match self {
            ThresholdModel::Shared => mu_law(n, k, ell),
            ThresholdModel::OrientedTransitive => mu_directed_law(n, k, ell),
            ThresholdModel::Oriented(h) => {
                check_orientation_order(h, k)?;
                let model = orientation_type_matrix::<T>(h, ell)?;
                let scale = model.scale_law(n);
                let root = model.perron_root()?;
                Ok(PowerLaw::new(scale.ln_coef + root.ln(), scale.exponent))
            }
            ThresholdModel::EdgeJoined => mu_prime_law(n, k, ell),
        }
    }
}

fn check_orientation_order(h: &OrientationSpec, k: usize) -> Result<()> {
    if h.k() != k {
        return Err(Error::invalid(format!("orientation has order {}, expected k={k}", h.k())));
    }
    Ok(())
}

/// Critical edge probability: the `p` at which the model's mean-offspring
/// parameter equals one.
pub fn critical_p<T: Scalar>(n: u64, k: usize, ell: usize, model: &ThresholdModel) -> Result<T> {
    model.growth_law::<T>(n, k, ell)?.solve(T::one())
}

/// Theory predictions for one `(n, p)` point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport<T> {
    pub variant: String,
    pub n: u64,
    pub k: usize,
    pub ell: usize,
    pub p: T,
    /// `mu`, directed `mu`, `mu'` or the Perron growth rate, per variant.
    pub mu: T,
    pub critical_p: T,
    /// Predicted fraction of copies in the largest component.
    pub sigma: T,
    /// Expected number of copies.
    pub nu: T,
}

pub fn threshold_report<T: Scalar>(
    model: &ThresholdModel,
    n: u64,
    p: T,
    k: usize,
    ell: usize,
) -> Result<ThresholdReport<T>> {
    check_p(p)?;
    let law = model.growth_law::<T>(n, k, ell)?;
    let mu = law.eval(p);
    let (sigma, nu_value) = match model {
        ThresholdModel::Shared => (survival_sigma(k, ell, mu)?, nu(n, p, k)?),
        ThresholdModel::OrientedTransitive => (
            survival_sigma(k, ell, mu)?,
            nu_oriented(n, p, &OrientationSpec::transitive(k)?)?,
        ),
        ThresholdModel::Oriented(h) => {
            let m = orientation_type_matrix::<T>(h, ell)?.instantiate(n, p);
            (m.survival()?, nu_oriented(n, p, h)?)
        }
        ThresholdModel::EdgeJoined => (survival_sigma0(mu)?, nu(n, p, k)?),
    };
    Ok(ThresholdReport {
        variant: model.name().to_owned(),
        n,
        k,
        ell,
        p,
        mu,
        critical_p: law.solve(T::one())?,
        sigma,
        nu: nu_value,
    })
}
