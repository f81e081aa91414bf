//! Deterministic minimization over the unit sphere: a Fibonacci lattice on the
//! upper hemisphere followed by coordinate-wise golden-section refinement.
//!
//! Every objective used here is even in `n`, so only one hemisphere is sampled.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{tangent_frame, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// lattice points on the hemisphere
    pub density: usize,
    /// number of best lattice cells that get refined
    pub refine_seeds: usize,
    pub refine_rounds: usize,
    pub golden_iterations: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            density: 4096,
            refine_seeds: 8,
            refine_rounds: 3,
            golden_iterations: 40,
        }
    }
}

impl SweepConfig {
    pub fn with_density(density: usize) -> Self {
        Self {
            density,
            ..Self::default()
        }
    }

    /// Cheap setting for large batch runs.
    pub fn coarse() -> Self {
        Self {
            density: 64,
            refine_seeds: 1,
            refine_rounds: 1,
            golden_iterations: 16,
        }
    }

    fn spacing(&self) -> f64 {
        (2.0 * std::f64::consts::PI / self.density.max(1) as f64).sqrt()
    }
}

/// `count` points of a Fibonacci lattice on the hemisphere `z >= 0`.
pub fn fibonacci_hemisphere(count: usize) -> Vec<Vec3> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Coordinate axes, face diagonals and body diagonals (one per antipodal pair).
pub fn canonical_directions() -> Vec<Vec3> {
    let mut out = vec![Vec3::x(), Vec3::y(), Vec3::z()];
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for sign in [1.0, -1.0] {
            let mut v = Vec3::zeros();
            v[a] = 1.0;
            v[b] = sign;
            out.push(v.normalize());
        }
    }
    for (sy, sz) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        out.push(Vec3::new(1.0, sy, sz).normalize());
    }
    out
}

/// Lattice plus canonical directions.
pub fn sweep_directions(config: &SweepConfig) -> Vec<Vec3> {
    let mut dirs = fibonacci_hemisphere(config.density);
    dirs.extend(canonical_directions());
    dirs
}

/// Minimum found on the sphere; `value` is `f(n)` at the returned `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereMin {
    pub value: f64,
    pub n: Vec3,
}

/// Golden-section minimization of `f` on `[a, b]`; returns the best point seen.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iterations {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

fn refine_from<F: Fn(&Vec3) -> f64>(f: &F, start: SphereMin, config: &SweepConfig) -> SphereMin {
    let mut best = start;
    let mut width = 2.0 * config.spacing();
    for _ in 0..config.refine_rounds {
        for axis in 0..2 {
            let center = best.n;
            let (t, s) = tangent_frame(&center);
            let dir = if axis == 0 { t } else { s };
            let chart = |u: f64| (center + dir * u).normalize();
            let (u, value) = golden_section(|u| f(&chart(u)), -width, width, config.golden_iterations);
            if value < best.value {
                best = SphereMin { value, n: chart(u) };
            }
        }
        width *= 0.5;
    }
    best
}

fn best_indices(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx.truncate(k.max(1).min(values.len()));
    idx
}

/// Refines the best `refine_seeds` entries of a precomputed lattice evaluation.
pub fn refine<F: Fn(&Vec3) -> f64 + Sync>(
    f: &F,
    dirs: &[Vec3],
    values: &[f64],
    config: &SweepConfig,
) -> SphereMin {
    let seeds = best_indices(values, config.refine_seeds);
    let lattice_best = SphereMin {
        value: values[seeds[0]],
        n: dirs[seeds[0]],
    };
    if config.refine_rounds == 0 {
        return lattice_best;
    }
    seeds
        .par_iter()
        .map(|&i| {
            refine_from(
                f,
                SphereMin {
                    value: values[i],
                    n: dirs[i],
                },
                config,
            )
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(lattice_best, |acc, m| if m.value < acc.value { m } else { acc })
}

/// Minimizes an even function of the unit direction.
pub fn minimize<F: Fn(&Vec3) -> f64 + Sync>(f: F, config: &SweepConfig) -> SphereMin {
    let dirs = sweep_directions(config);
    let values: Vec<f64> = dirs.par_iter().map(&f).collect();
    refine(&f, &dirs, &values, config)
}

/// Minimizes `K` objectives sharing one lattice pass. `joint` evaluates all
/// objectives at once; `single(j, n)` evaluates objective `j` alone.
pub fn minimize_many<const K: usize, J, S>(joint: J, single: S, config: &SweepConfig) -> [SphereMin; K]
where
    J: Fn(&Vec3) -> [f64; K] + Sync,
    S: Fn(usize, &Vec3) -> f64 + Sync,
{
    let dirs = sweep_directions(config);
    let table: Vec<[f64; K]> = dirs.par_iter().map(&joint).collect();
    std::array::from_fn(|j| {
        let values: Vec<f64> = table.iter().map(|row| row[j]).collect();
        refine(&|n: &Vec3| single(j, n), &dirs, &values, config)
    })
}
