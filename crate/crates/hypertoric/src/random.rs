//! Seeded random arrangements for property tests and batch verification.

use foundations::rational::rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::PolarizedArrangement;

/// A valid arrangement with small integer data, drawn deterministically from
/// `seed`. Draws whose arrangement or Gale dual fails validation are redrawn.
pub fn random_arrangement(n: usize, k: usize, seed: u64) -> PolarizedArrangement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 40 ^ (k as u64) << 48);
    loop {
        let cols: Vec<Vec<_>> = (0..k).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect();
        let eta = (0..n).map(|_| rat(rng.gen_range(-7..=7))).collect();
        let xi = (0..n).map(|_| rat(rng.gen_range(-4..=4))).collect();
        if let Ok(a) = PolarizedArrangement::new(n, k, cols, eta, xi) {
            if a.gale_dual().is_ok() {
                return a;
            }
        }
    }
}
