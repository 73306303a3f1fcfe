//! Seeds and the deterministic random number generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Generator behind every seeded draw in this crate.
pub type Rng = ChaCha8Rng;

/// Name and version of [`Rng`], recorded in experiment output.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64)";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> Rng {
        Rng::seed_from_u64(self.0)
    }

    /// Derives an independent child seed for `stream`.
    ///
    /// The child is `splitmix64(master + (stream + 1) * 0x9E3779B97F4A7C15)`.
    /// Both steps are bijections of `u64`, so distinct streams under one master
    /// always yield distinct child seeds.
    pub fn derive(self, stream: u64) -> Seed {
        let z = self
            .0
            .wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        Seed(splitmix64_mix(z))
    }

    /// Child seed for trial `trial` of grid point `point` in a sweep.
    pub fn for_trial(self, point: u32, trial: u32) -> Seed {
        self.derive(((point as u64) << 32) | trial as u64)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
