//! Seed derivation and complex noise draws.
//!
//! Experiments key every random stream off a single master seed plus a path
//! of integer tags (trial index, method index, sweep index). Streams derived
//! this way are independent of scheduling, so trial-level parallelism cannot
//! change any result.

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// SplitMix64 finalizer. Bijective, well-mixed, stable across platforms.
#[inline]
fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a stream seed from a master seed and a tag path.
///
/// Equal inputs give equal outputs on every platform; distinct paths give
/// (for all practical purposes) independent streams.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = mix(master);
    for &tag in path {
        state = mix(state ^ tag);
    }
    state
}

/// Builds the deterministic generator for one derived stream.
pub fn stream_rng(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}

/// Draws a circularly symmetric complex Gaussian sample with total variance
/// `variance` (so each quadrature has variance `variance / 2`).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}
