//! Seeded random streams.
//!
//! A [`SeedSpec`] names one ChaCha8 stream: the 64-bit seed picks the key and
//! the replication index picks the stream, so replications never overlap and
//! the same pair always yields the same draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeedSpec {
    pub seed: u64,
    pub stream: u64,
}

impl SeedSpec {
    pub const fn new(seed: u64, stream: u64) -> Self {
        SeedSpec { seed, stream }
    }

    pub fn rng(&self) -> SimRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Independent child stream, e.g. the `j`-th envelope simulation of a
    /// replication. The child key mixes both parent fields, so children of
    /// different parents do not collide.
    pub fn child(&self, index: u64) -> SeedSpec {
        SeedSpec { seed: splitmix64(splitmix64(self.seed) ^ self.stream), stream: index }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
