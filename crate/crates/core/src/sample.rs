//! Seeded random sampling helpers shared by property checks and sweeps.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

/// Deterministic RNG used by every seeded sweep.
pub type SeededRng = ChaCha8Rng;

/// RNG for a given seed.
pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent seed for the `index`-th member of a seeded family, drawn from
/// a separate ChaCha stream so that neighbouring base seeds do not share
/// members.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut r = rng(seed);
    r.set_stream(index);
    r.next_u64()
}

/// Uniform sample from the complex disk of the given radius.
pub fn disk(rng: &mut SeededRng, radius: f64) -> C64 {
    loop {
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        if re * re + im * im <= 1.0 {
            return C64::new(re * radius, im * radius);
        }
    }
}

/// Uniform sample from the complex annulus `r_min ≤ |z| ≤ r_max`.
pub fn annulus(rng: &mut SeededRng, r_min: f64, r_max: f64) -> C64 {
    let r: f64 = rng.gen_range(r_min..=r_max);
    let t: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
    C64::from_polar(r, t)
}

/// Uniform real sample from `[lo, hi)`.
pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// Uniform integer sample from `[lo, hi)`.
pub fn index(rng: &mut SeededRng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..hi)
}

/// Complex sample with independent uniform real and imaginary parts in a box.
pub fn boxed(rng: &mut SeededRng, re: (f64, f64), im: (f64, f64)) -> C64 {
    C64::new(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1))
}
