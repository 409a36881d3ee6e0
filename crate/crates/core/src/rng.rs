//! Deterministic pseudorandom numbers.
//!
//! Monte Carlo results and optimizer starting points must be bit-reproducible
//! across platforms and thread counts, so the generator is pinned here rather
//! than taken from an external crate: SplitMix64 (Steele, Lea and Flood's
//! 64-bit finalizer-based generator). Every draw is a fixed sequence of u64
//! operations, and f64 conversion keeps the top 53 bits, so identical seeds
//! give identical trajectories everywhere.

/// SplitMix64 generator. State advances by a fixed odd constant and each
/// output is a finalizer hash of the state, so even seeds 0 and 1 produce
/// unrelated streams.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for a numbered sub-task (one per Monte Carlo
    /// trial). The seed is scrambled once so substreams never collide with
    /// the plain `new(seed)` stream, then offset by the index.
    pub fn substream(seed: u64, index: u64) -> Self {
        let scrambled = Self::new(seed).next_u64();
        Self::new(scrambled ^ index.wrapping_mul(GAMMA))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw from [-1, 1).
    pub fn next_symmetric(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Uniform index in 0..n. The modulo bias is below 2^-50 for the list
    /// sizes used here.
    pub fn next_index(&mut self, n: usize) -> usize {
        assert!(n > 0, "next_index needs a nonempty range");
        (self.next_u64() % n as u64) as usize
    }
}
