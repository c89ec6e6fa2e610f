use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Seed descriptor for every Monte-Carlo routine in the crate.
///
/// The stream index selects an independent ChaCha20 stream for the same seed,
/// so work can be sharded without the shards overlapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededRng {
    pub seed: u64,
    pub stream: u64,
}

impl SeededRng {
    pub const ALGORITHM: &'static str = "chacha20";

    pub fn new(seed: u64) -> Self {
        SeededRng { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        SeededRng { stream, ..self }
    }

    pub fn generator(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
