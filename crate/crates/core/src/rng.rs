//! Seed derivation for reproducible, scheduling-independent randomness.
//!
//! Every randomized operation in this crate takes an explicit seed and
//! derives per-task sub-seeds with [`derive_seed`]. Workers never share
//! RNG state, so results do not depend on thread scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Mix a base seed with a stream index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for a derived stream.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream))
}

/// Stream tags keeping independent uses of one user seed apart.
pub mod streams {
    pub const BOOTSTRAP: u64 = 0x01;
    pub const FOLDS: u64 = 0x02;
    pub const SMOTE: u64 = 0x03;
    pub const ROUTE: u64 = 0x04;
    pub const PERMUTE: u64 = 0x05;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_across_streams() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        let c = derive_seed(43, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn derivation_is_stable() {
        // Frozen values: changing the mixer would silently break stored seeds.
        assert_eq!(derive_seed(0, 0), 0);
        assert_eq!(derive_seed(1, 0), 6238072747940578789);
        assert_eq!(derive_seed(42, 7), 6249643597913911348);
    }
}
