//! Seeded random materials and directions for tests, benchmarks and sweeps.

use rand::Rng;

use crate::linalg::{tangent_frame, Vec3};
use crate::tensor::{CauchyTensor, CosseratTensor, Matrix6, Matrix8};

fn symmetric_sample<const D: usize, R: Rng + ?Sized>(rng: &mut R, shift: f64) -> nalgebra::SMatrix<f64, D, D> {
    let r = nalgebra::SMatrix::<f64, D, D>::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    r.transpose() * r / D as f64 + nalgebra::SMatrix::<f64, D, D>::identity() * shift
}

/// Positive definite: `R^T R / 6 + sigma I` on the Mandel basis, `sigma` in `[0.05, 0.5)`.
pub fn cauchy_pd<R: Rng + ?Sized>(rng: &mut R) -> CauchyTensor {
    let sigma = rng.gen_range(0.05..0.5);
    CauchyTensor::from_mandel(&symmetric_sample::<6, _>(rng, sigma)).expect("finite sample")
}

/// Same construction shifted down so that it is usually indefinite.
pub fn cauchy_indefinite<R: Rng + ?Sized>(rng: &mut R) -> CauchyTensor {
    let shift = -rng.gen_range(0.0..0.6);
    CauchyTensor::from_mandel(&symmetric_sample::<6, _>(rng, shift)).expect("finite sample")
}

pub fn cosserat_pd<R: Rng + ?Sized>(rng: &mut R) -> CosseratTensor {
    let sigma = rng.gen_range(0.05..0.5);
    CosseratTensor::from_deviatoric(&symmetric_sample::<8, _>(rng, sigma)).expect("finite sample")
}

pub fn cosserat_indefinite<R: Rng + ?Sized>(rng: &mut R) -> CosseratTensor {
    let shift = -rng.gen_range(0.0..0.6);
    CosseratTensor::from_deviatoric(&symmetric_sample::<8, _>(rng, shift)).expect("finite sample")
}

/// Symmetric matrix with independent entries in `[-1, 1)`; no sign structure.
pub fn cauchy_general<R: Rng + ?Sized>(rng: &mut R) -> CauchyTensor {
    let m = Matrix6::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    CauchyTensor::from_mandel(&((m + m.transpose()) * 0.5)).expect("finite sample")
}

pub fn cosserat_general<R: Rng + ?Sized>(rng: &mut R) -> CosseratTensor {
    let m = Matrix8::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    CosseratTensor::from_deviatoric(&((m + m.transpose()) * 0.5)).expect("finite sample")
}

/// Pair drawn from a mixture of the constructions above, so that every level
/// of the stability hierarchy is represented.
pub fn mixed_pair<R: Rng + ?Sized>(rng: &mut R) -> (CauchyTensor, CosseratTensor) {
    let c = match rng.gen_range(0..3) {
        0 => cauchy_pd(rng),
        1 => cauchy_indefinite(rng),
        _ => cauchy_general(rng),
    };
    let b = match rng.gen_range(0..3) {
        0 => cosserat_pd(rng),
        1 => cosserat_indefinite(rng),
        _ => cosserat_general(rng),
    };
    (c, b)
}

/// Uniform on the unit sphere.
pub fn direction<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let r = v.norm();
        if r > 1e-3 && r <= 1.0 {
            return v / r;
        }
    }
}

/// Random vector orthogonal to `n` with length in `[0.1, 2)`.
pub fn tangent<R: Rng + ?Sized>(rng: &mut R, n: &Vec3) -> Vec3 {
    let (t, s) = tangent_frame(n);
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    (t * angle.cos() + s * angle.sin()) * rng.gen_range(0.1..2.0)
}
