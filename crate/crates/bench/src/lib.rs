//! Seeded fixtures shared by the benchmarks.

use cosserat_core::{ensemble, CauchyTensor, CosseratTensor, Vec3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn materials(count: usize, seed: u64) -> Vec<(CauchyTensor, CosseratTensor)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| ensemble::mixed_pair(&mut rng)).collect()
}

/// Directions with a random tangent vector each.
pub fn surfaces(count: usize, seed: u64) -> Vec<(Vec3, Vec3)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = ensemble::direction(&mut rng);
            (n, ensemble::tangent(&mut rng, &n))
        })
        .collect()
}
