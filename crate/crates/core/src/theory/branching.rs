//! Monte Carlo simulation of the branching processes, used as an independent
//! check on the fixed-point solvers.

use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::{Rng, Seed};

use super::combinatorics::binomial_exact;

/// Population at which a run is declared surviving without simulating on.
pub const SURVIVAL_POPULATION_CUTOFF: u64 = 10_000;

pub const DEFAULT_MAX_GENERATIONS: u32 = 200;

const TRIALS_PER_CHUNK: u64 = 4096;

/// Which process to simulate.
#[derive(Debug, Clone)]
pub enum BranchingProcess<T> {
    /// One particle; each particle has `M * Z` children, `Z ~ Poisson(lambda / M)`,
    /// `M = C(k, ell) - 1`.
    Single { k: usize, ell: usize, lambda: T },
    /// As `Single`, started from `C(k, ell)` particles.
    BinomStart { k: usize, ell: usize, lambda: T },
    /// One particle with Poisson(`lambda`) offspring.
    Poisson { lambda: T },
    /// One particle of each type; a type-`A` particle draws
    /// `Z_B ~ Poisson(m[B][A] * scale)` and has `sum_{B != A'} Z_B` children
    /// of type `A'`.
    MultiType { m: Vec<Vec<u64>>, scale: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalEstimate {
    pub trials: u64,
    pub survived: u64,
    pub estimate: f64,
    pub stderr: f64,
}

enum Kernel {
    /// Population-level offspring: `family * Poisson(rate * population)`.
    Scaled { family: u64, rate: f64, start: u64 },
    Typed { m: Vec<Vec<f64>>, types: usize },
}

fn family_size(k: usize, ell: usize) -> Result<u64> {
    if ell < 1 || ell >= k {
        return Err(Error::invalid(format!("ell={ell} outside [1, k-1] for k={k}")));
    }
    binomial_exact(k as u64, ell as u64)
        .map(|c| c as u64)
        .ok_or_else(|| Error::Unsupported(format!("C({k},{ell}) too large")))
}

fn nonnegative(x: f64, what: &str) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::invalid(format!("{what} {x} must be finite and >= 0")));
    }
    Ok(x)
}

impl<T: Scalar> BranchingProcess<T> {
    fn kernel(&self) -> Result<Kernel> {
        Ok(match self {
            BranchingProcess::Single { k, ell, lambda } | BranchingProcess::BinomStart { k, ell, lambda } => {
                let roots = family_size(*k, *ell)?;
                let family = roots - 1;
                let lambda = nonnegative(lambda.as_f64(), "offspring mean")?;
                let start = if matches!(self, BranchingProcess::Single { .. }) { 1 } else { roots };
                Kernel::Scaled {
                    family,
                    rate: lambda / family as f64,
                    start,
                }
            }
            BranchingProcess::Poisson { lambda } => Kernel::Scaled {
                family: 1,
                rate: nonnegative(lambda.as_f64(), "offspring mean")?,
                start: 1,
            },
            BranchingProcess::MultiType { m, scale } => {
                let types = m.len();
                if types == 0 || m.iter().any(|r| r.len() != types) {
                    return Err(Error::invalid("type matrix must be square and non-empty"));
                }
                let scale = nonnegative(scale.as_f64(), "Poisson scale")?;
                Kernel::Typed {
                    m: m.iter()
                        .map(|r| r.iter().map(|&x| x as f64 * scale).collect())
                        .collect(),
                    types,
                }
            }
        })
    }
}

fn poisson(rng: &mut Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng) as u64
}

impl Kernel {
    fn survives(&self, rng: &mut Rng, max_generations: u32) -> bool {
        match self {
            Kernel::Scaled { family, rate, start } => {
                let mut population = *start;
                for _ in 0..max_generations {
                    if population == 0 {
                        return false;
                    }
                    if population >= SURVIVAL_POPULATION_CUTOFF {
                        return true;
                    }
                    // sum of independent Poissons is Poisson
                    population = family * poisson(rng, rate * population as f64);
                }
                population > 0
            }
            Kernel::Typed { m, types } => {
                let mut counts = vec![1u64; *types];
                let mut draws = vec![0u64; *types];
                for _ in 0..max_generations {
                    let total: u64 = counts.iter().sum();
                    if total == 0 {
                        return false;
                    }
                    if total >= SURVIVAL_POPULATION_CUTOFF {
                        return true;
                    }
                    for (b, draw) in draws.iter_mut().enumerate() {
                        let mean: f64 = counts
                            .iter()
                            .enumerate()
                            .map(|(a, &c)| c as f64 * m[b][a])
                            .sum();
                        *draw = poisson(rng, mean);
                    }
                    let found: u64 = draws.iter().sum();
                    for (c, &d) in counts.iter_mut().zip(&draws) {
                        *c = found - d;
                    }
                }
                counts.iter().any(|&c| c > 0)
            }
        }
    }
}

/// Estimates the survival probability of `process`.
///
/// A run survives if it is alive after `max_generations` generations or its
/// population reaches [`SURVIVAL_POPULATION_CUTOFF`]. Trials are split into
/// fixed-size chunks, each seeded from `seed`, so the estimate does not
/// depend on the thread count.
pub fn branching_mc<T: Scalar>(
    process: &BranchingProcess<T>,
    trials: u64,
    max_generations: u32,
    seed: Seed,
) -> Result<SurvivalEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let kernel = process.kernel()?;
    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    let survived: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = seed.derive(chunk).rng();
            let len = TRIALS_PER_CHUNK.min(trials - chunk * TRIALS_PER_CHUNK);
            (0..len)
                .filter(|_| kernel.survives(&mut rng, max_generations))
                .count() as u64
        })
        .sum();
    let estimate = survived as f64 / trials as f64;
    Ok(SurvivalEstimate {
        trials,
        survived,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
    })
}
