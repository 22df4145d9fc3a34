//! Counter-based normal draws.
//!
//! Every variate is a pure function of `(seed, tag, index)`: two 64-bit words
//! are produced by hashing the counter with the stream key (SplitMix64
//! finaliser), and turned into a normal by Box-Muller. There is no mutable
//! state, so any partition of an index range across threads yields the same
//! bits.

use std::f64::consts::TAU;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const TAG_SALT: u64 = 0xD1B5_4A32_D192_ED03;
const FORK_SALT: u64 = 0x632B_E59B_D9B4_E019;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An independent stream of variates identified by `(seed, tag)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededStream {
    seed: u64,
    tag: u64,
    key: u64,
}

impl SeededStream {
    pub fn new(seed: u64, tag: u64) -> Self {
        let key = mix64(seed.wrapping_add(GOLDEN)) ^ mix64(tag ^ TAG_SALT);
        Self { seed, tag, key: mix64(key) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tag(&self) -> u64 {
        self.tag
    }

    /// A child stream with the same seed and a tag derived from `label`.
    pub fn fork(&self, label: u64) -> Self {
        let tag = mix64(self.tag ^ mix64(label.wrapping_add(FORK_SALT)));
        Self::new(self.seed, tag)
    }

    #[inline]
    fn word(&self, counter: u64) -> u64 {
        mix64(self.key.wrapping_add(mix64(counter.wrapping_add(GOLDEN))))
    }

    /// Uniform variate on `(0, 1]`, 53-bit resolution.
    #[inline]
    pub fn uniform_open(&self, index: u64) -> f64 {
        ((self.word(index) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate number `index`.
    #[inline]
    pub fn normal(&self, index: u64) -> f64 {
        let c = index.wrapping_mul(2);
        let u1 = ((self.word(c) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = (self.word(c.wrapping_add(1)) >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    }

    /// Exponential(1) variate number `index`.
    #[inline]
    pub fn exponential(&self, index: u64) -> f64 {
        -self.uniform_open(index).ln()
    }

    /// Normals with indices `start..start + len`.
    pub fn normals(&self, start: u64, len: usize) -> Vec<f64> {
        (0..len as u64).map(|k| self.normal(start + k)).collect()
    }
}

/// The `index`-th standard normal draw of `stream`.
pub fn normal_draw(stream: &SeededStream, index: u64) -> f64 {
    stream.normal(index)
}
