//! Deterministic uniform streams shared by every sampler in the crate.
//!
//! ChaCha8 keyed by the user seed gives the same sequence on every platform
//! and every run, which the reproducibility contract of the samplers and the
//! CLI depends on. Draws are mapped into (0, 1]: the standard generator
//! yields [0, 1), and `1 - u` flips it so that 0 is excluded and exact 1.0
//! stays reachable, matching the distributions' support.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn uniform_open_closed(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect()
}
