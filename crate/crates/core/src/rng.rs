//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit seed. Parallel work items derive
//! their own stream from `(seed, index)` so results do not depend on thread
//! scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a work-item index (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw on `[0, 1)`.
pub fn uniform<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.random::<f64>())
}

pub fn standard_normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Roulette-wheel pick over unnormalized nonnegative weights.
///
/// Returns `None` when `weights` is empty or sums to zero.
pub fn roulette<T: Scalar, R: Rng + ?Sized>(weights: &[T], rng: &mut R) -> Option<usize> {
    let total: T = weights.iter().copied().sum();
    if weights.is_empty() || !(total > T::zero()) {
        return None;
    }
    let target = uniform::<T, _>(rng) * total;
    let mut acc = T::zero();
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return Some(i);
        }
    }
    // Rounding can leave `target` a hair above the final cumulative sum.
    weights.iter().rposition(|&w| w > T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_per_index() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        assert_ne!(a, b);
        assert_eq!(a, derive_seed(7, 0));
    }

    #[test]
    fn roulette_skips_zero_weights() {
        let mut rng = seeded(1);
        for _ in 0..1000 {
            let i = roulette(&[0.0f64, 1.0, 0.0], &mut rng).unwrap();
            assert_eq!(i, 1);
        }
        assert_eq!(roulette::<f64, _>(&[], &mut rng), None);
        assert_eq!(roulette(&[0.0f64, 0.0], &mut rng), None);
    }
}
