//! Reproducible random streams.
//!
//! Every random draw in the crate comes from a [`StreamRng`], a xoshiro256**
//! generator whose state is a pure function of a [`SeedSpec`]:
//!
//! ```text
//! key   = splitmix64_mix(master_seed) ^ splitmix64_mix(stream_index ^ 0xD1B5_4A32_D192_ED03)
//! state = four consecutive outputs of SplitMix64 started at `key`
//! ```
//!
//! Integer ranges use Lemire's multiply-and-reject method and floats use the
//! top 53 bits, so outputs are identical on every platform.

use num_bigint::BigUint;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// Identifies one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self { master_seed, stream_index }
    }

    /// Stream used for trial `trial` of sweep cell `cell`.
    pub fn for_trial(master_seed: u64, cell: u32, trial: u32) -> Self {
        Self::new(master_seed, ((cell as u64) << 32) | trial as u64)
    }

    pub fn rng(self) -> StreamRng {
        StreamRng::from_seed(self)
    }
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256** seeded through SplitMix64.
#[derive(Debug, Clone)]
pub struct StreamRng {
    s: [u64; 4],
}

impl StreamRng {
    pub fn from_seed(seed: SeedSpec) -> Self {
        let mut x = mix64(seed.master_seed) ^ mix64(seed.stream_index ^ STREAM_SALT);
        let mut s = [0u64; 4];
        for slot in &mut s {
            x = x.wrapping_add(GOLDEN);
            *slot = mix64(x);
        }
        if s.iter().all(|&w| w == 0) {
            s[0] = GOLDEN;
        }
        Self { s }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform integer in `0..bound`; `bound` must be positive.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let mut m = (self.next_u64() as u128) * (bound as u128);
        let mut lo = m as u64;
        if lo < bound {
            let threshold = bound.wrapping_neg() % bound;
            while lo < threshold {
                m = (self.next_u64() as u128) * (bound as u128);
                lo = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Uniform integer in `0..bound` for 128-bit bounds, by masked rejection.
    pub fn below_u128(&mut self, bound: u128) -> u128 {
        assert!(bound > 0, "empty range");
        if bound <= u64::MAX as u128 {
            return self.below(bound as u64) as u128;
        }
        let bits = 128 - (bound - 1).leading_zeros();
        let mask = if bits == 128 { u128::MAX } else { (1u128 << bits) - 1 };
        loop {
            let x = (((self.next_u64() as u128) << 64) | self.next_u64() as u128) & mask;
            if x < bound {
                return x;
            }
        }
    }

    /// Uniform big integer in `0..bound`, by masked rejection on 64-bit limbs.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(bound.bits() > 0, "empty range");
        let bits = (bound - 1u32).bits().max(1);
        let limbs = bits.div_ceil(64) as usize;
        let top_bits = bits - 64 * (limbs as u64 - 1);
        let top_mask = if top_bits == 64 { u64::MAX } else { (1u64 << top_bits) - 1 };
        loop {
            let mut digits: Vec<u64> = (0..limbs).map(|_| self.next_u64()).collect();
            digits[limbs - 1] &= top_mask;
            let x =
                BigUint::from_slice(&digits.iter().flat_map(|d| [*d as u32, (*d >> 32) as u32]).collect::<Vec<u32>>());
            if &x < bound {
                return x;
            }
        }
    }

    /// Uniform float in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform float in `(0, 1]`.
    #[inline]
    pub fn unit_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
