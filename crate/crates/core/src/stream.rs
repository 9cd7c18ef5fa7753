//! Counter-based deterministic random streams.
//!
//! A stream is keyed by a 64-bit master seed plus a derivation path
//! (image id, variant, factor index, lane). Draw `i` of a stream is a pure
//! function of that key and `i`, so independent tasks can run in any order or
//! in parallel and still see exactly the same values.

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Human-readable description of the key derivation, recorded in manifests.
pub const STREAM_HASH_DESCRIPTION: &str = "key = splitmix64 chain over (master_seed, fnv1a64(image_id), variant, \
     factor_index, lane); draw_i = splitmix64_mix(key + (i + 1) * 0x9E3779B97F4A7C15)";

/// SplitMix64 output mixer.
#[inline]
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a over UTF-8 bytes.
pub fn fnv1a64(s: &str) -> u64 {
    s.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3))
}

/// Where a stream sits in the synthesis tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamPath {
    pub image_id: String,
    pub variant: u32,
    pub factor_index: u32,
    pub lane: u32,
}

impl StreamPath {
    pub fn new(image_id: impl Into<String>, variant: u32, factor_index: u32, lane: u32) -> Self {
        Self { image_id: image_id.into(), variant, factor_index, lane }
    }
}

#[derive(Debug, Clone)]
pub struct SeededStream {
    key: u64,
    counter: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, path: &StreamPath) -> Self {
        let mut key = splitmix64_mix(master_seed.wrapping_add(GOLDEN_GAMMA));
        for part in
            [fnv1a64(&path.image_id), u64::from(path.variant), u64::from(path.factor_index), u64::from(path.lane)]
        {
            key = splitmix64_mix(key ^ splitmix64_mix(part.wrapping_add(GOLDEN_GAMMA)));
        }
        Self { key, counter: 0 }
    }

    /// Stream keyed directly by a seed, for tests and ad-hoc sampling.
    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, &StreamPath::new("", 0, 0, 0))
    }

    /// Number of 64-bit draws consumed so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    pub fn next_draw(&mut self) -> u64 {
        self.counter += 1;
        splitmix64_mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform on the closed unit interval `[0, 1]`.
    pub fn unit(&mut self) -> f64 {
        (self.next_draw() >> 11) as f64 / ((1u64 << 53) - 1) as f64
    }

    /// Uniform on the closed interval `[lo, hi]`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo <= hi, "empty range [{lo}, {hi}]");
        (lo + (hi - lo) * self.unit()).clamp(lo, hi)
    }

    /// Uniform integer on the closed range `[lo, hi]`.
    pub fn uniform_int(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = hi - lo + 1;
        if span == 0 {
            return self.next_draw();
        }
        lo + ((u128::from(self.next_draw()) * u128::from(span)) >> 64) as u64
    }

    pub fn coin(&mut self) -> bool {
        self.next_draw() >> 63 == 1
    }

    /// Picks one element uniformly.
    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.uniform_int(0, items.len() as u64 - 1) as usize]
    }

    /// Standard normal deviate scaled by `std`.
    pub fn normal(&mut self, std: f64) -> f64 {
        let z: f64 = StandardNormal.sample(self);
        z * std
    }
}

impl RngCore for SeededStream {
    fn next_u32(&mut self) -> u32 {
        (self.next_draw() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.next_draw()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_draw().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
