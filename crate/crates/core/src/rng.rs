use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed plus stream index. Equal configs yield bit-identical draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomConfig {
    pub seed: u64,
    pub stream_index: u64,
}

impl RandomConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream_index: 0 }
    }

    pub fn with_stream(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// Child stream for restart or sample `index`.
    ///
    /// Children of distinct parents or distinct indices land on distinct
    /// ChaCha streams (up to 64-bit mixing collisions).
    pub fn fork(&self, index: u64) -> Self {
        Self {
            seed: self.seed,
            stream_index: splitmix64(self.stream_index ^ splitmix64(index.wrapping_add(0x9E37_79B9))),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

impl Default for RandomConfig {
    fn default() -> Self {
        Self::new(0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
