//! Deterministic random streams.
//!
//! A small splitmix64 generator instead of an external RNG crate: every
//! sampler in this crate must regenerate bit-identical output from a u64
//! seed, on any platform, forever. splitmix64 is a single multiply-xor
//! chain with well-studied equidistribution and no state beyond one word.

/// Seeded deterministic generator (splitmix64).
#[derive(Debug, Clone)]
pub struct DetRng {
    state: u64,
}

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng { state: seed }
    }

    /// Independent child stream, e.g. one per Monte-Carlo path. Children
    /// derived from the same (seed, index) pair are identical.
    pub fn child(&self, index: u64) -> DetRng {
        let mut mix = DetRng {
            state: self.state ^ index.wrapping_mul(GAMMA).rotate_left(17),
        };
        // burn two outputs so trivially related indices decorrelate
        mix.next_u64();
        mix.next_u64();
        mix
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 significant bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in 0..bound (bound > 0), via 128-bit multiply;
    /// bias is below 2^-64 which is irrelevant for digit draws.
    pub fn next_below(&mut self, bound: u32) -> u32 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u32
    }
}
