//! Acoustic tensors, plane-wave solutions, longitudinal directions and the
//! isotropic dispersion relation.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{canonical_sign, check_unit, skew, sym3_eigen, tangent_frame, to_array, Mat3, Vec3};
use crate::sphere::{canonical_directions, fibonacci_hemisphere};
use crate::tensor::{CauchyTensor, CosseratTensor};

/// `A_C(n)_qn = C_pqmn n_p n_m`, without validating `n`.
pub(crate) fn cauchy_acoustic(c: &CauchyTensor, n: &Vec3) -> Mat3 {
    let comp = c.components();
    let mut a = Mat3::zeros();
    for p in 0..3 {
        for m in 0..3 {
            let w = n[p] * n[m];
            if w == 0.0 {
                continue;
            }
            for q in 0..3 {
                for l in 0..3 {
                    a[(q, l)] += comp[p][q][m][l] * w;
                }
            }
        }
    }
    (a + a.transpose()) * 0.5
}

/// `G(n)_ks = n_r n_t B_rkts`: the form `q . G q` is `B` evaluated on the
/// rank-one curvature `n (x) q`.
pub(crate) fn cosserat_rank_one(b: &CosseratTensor, n: &Vec3) -> Mat3 {
    let comp = b.components();
    let mut g = Mat3::zeros();
    for r in 0..3 {
        for t in 0..3 {
            let w = n[r] * n[t];
            if w == 0.0 {
                continue;
            }
            for k in 0..3 {
                for s in 0..3 {
                    g[(k, s)] += comp[r][k][t][s] * w;
                }
            }
        }
    }
    (g + g.transpose()) * 0.5
}

/// `A_B = W G W^T / 4` with `W_qk = e_pqk n_p`, i.e. `W = -[n]x`.
pub(crate) fn cosserat_acoustic_from_rank_one(n: &Vec3, g: &Mat3) -> Mat3 {
    let w = skew(n);
    let a = w * g * w.transpose() * 0.25;
    (a + a.transpose()) * 0.5
}

pub(crate) fn cosserat_acoustic(b: &CosseratTensor, n: &Vec3) -> Mat3 {
    cosserat_acoustic_from_rank_one(n, &cosserat_rank_one(b, n))
}

/// Classical acoustic tensor `A_C(n)`.
pub fn acoustic_cauchy(c: &CauchyTensor, n: &Vec3) -> Result<Mat3> {
    check_unit(n)?;
    Ok(cauchy_acoustic(c, n))
}

/// Couple-stress acoustic tensor `A_B(n)`; always singular with `A_B n = 0`.
pub fn acoustic_cosserat(b: &CosseratTensor, n: &Vec3) -> Result<Mat3> {
    check_unit(n)?;
    Ok(cosserat_acoustic(b, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcousticPair {
    pub n: Vec3,
    pub cauchy: Mat3,
    pub cosserat: Mat3,
}

impl AcousticPair {
    pub fn new(c: &CauchyTensor, b: &CosseratTensor, n: &Vec3) -> Result<Self> {
        check_unit(n)?;
        Ok(Self {
            n: *n,
            cauchy: cauchy_acoustic(c, n),
            cosserat: cosserat_acoustic(b, n),
        })
    }

    /// `A(k, n) = k^2 A_C + k^4 A_B`.
    pub fn total(&self, k: f64) -> Mat3 {
        let k2 = k * k;
        self.cauchy * k2 + self.cosserat * (k2 * k2)
    }
}

pub fn total_acoustic(pair: &AcousticPair, k: f64) -> Mat3 {
    pair.total(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    Longitudinal,
    Transverse,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveBranch {
    pub omega_sq: f64,
    pub amplitude: [f64; 3],
    /// `omega / k`; absent when `omega^2 < 0` or `k = 0`
    pub phase_velocity: Option<f64>,
    pub polarization: Polarization,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveSolution {
    pub n: [f64; 3],
    pub k: f64,
    /// sorted by descending `omega^2`
    pub branches: [WaveBranch; 3],
}

impl WaveSolution {
    pub fn longitudinal(&self) -> Option<&WaveBranch> {
        self.branches
            .iter()
            .find(|b| b.polarization == Polarization::Longitudinal)
    }
}

/// Plane-wave eigenpairs of `A(k, n) / rho`.
///
/// At `k = 0` the frequencies vanish and the phase velocities are the
/// long-wave limits from `A_C / rho`.
pub fn wave_solve(
    c: &CauchyTensor,
    b: &CosseratTensor,
    rho: f64,
    n: &Vec3,
    k: f64,
) -> Result<WaveSolution> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::NonPositiveDensity(rho));
    }
    if !k.is_finite() {
        return Err(Error::NonFinite("wavenumber".into()));
    }
    let pair = AcousticPair::new(c, b, n)?;
    // eigenvalues of A/k^2, scaled back afterwards
    let reduced = pair.cauchy + pair.cosserat * (k * k);
    let eig = sym3_eigen(&reduced);
    let scale = reduced.norm();
    let residual = (0..3)
        .map(|i| (reduced * eig.vectors[i] - eig.vectors[i] * eig.values[i]).norm())
        .fold(0.0, f64::max);
    if residual > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::EigenSolve { residual });
    }
    // (v^2, branch); ordering by v^2 equals ordering by omega^2 for k != 0
    let mut branches: Vec<(f64, WaveBranch)> = (0..3)
        .map(|i| {
            let d = canonical_sign(&eig.vectors[i]);
            let v_sq = eig.values[i] / rho;
            let along = d.dot(n).abs();
            let polarization = if along > 1.0 - 1e-9 {
                Polarization::Longitudinal
            } else if along < 1e-9 {
                Polarization::Transverse
            } else {
                Polarization::Mixed
            };
            let branch = WaveBranch {
                omega_sq: k * k * v_sq,
                amplitude: to_array(&d),
                phase_velocity: (v_sq >= 0.0).then(|| v_sq.sqrt()),
                polarization,
            };
            (v_sq, branch)
        })
        .collect();
    let tie = 1e-12 * eig.values.iter().fold(0.0f64, |a, x| a.max(x.abs())) / rho;
    branches.sort_by(|(vx, x), (vy, y)| {
        if (vx - vy).abs() <= tie {
            y.amplitude
                .partial_cmp(&x.amplitude)
                .unwrap_or(std::cmp::Ordering::Equal)
        } else {
            vy.total_cmp(vx)
        }
    });
    Ok(WaveSolution {
        n: to_array(n),
        k,
        branches: [branches[0].1, branches[1].1, branches[2].1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongitudinalConfig {
    /// hemisphere seeds (canonical directions are always added)
    pub seeds: usize,
    pub max_iterations: usize,
    /// acceptance bound on `|A n - (n.A n) n| / |A|`
    pub tolerance: f64,
}

impl Default for LongitudinalConfig {
    fn default() -> Self {
        Self {
            seeds: 400,
            max_iterations: 60,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongitudinalSearch {
    /// sign-canonical, pairwise distinct (angle >= 1e-3 rad, `n ~ -n`)
    pub directions: Vec<[f64; 3]>,
    pub residuals: Vec<f64>,
    /// every seed was already aligned (isotropic-like `C`)
    pub all_longitudinal: bool,
    pub note: Option<String>,
}

/// Normalized alignment residual `|A n - (n.A n) n| / |A|`.
pub fn longitudinal_residual(c: &CauchyTensor, n: &Vec3) -> f64 {
    let a = cauchy_acoustic(c, n);
    let an = a * n;
    let r = (an - n * n.dot(&an)).norm();
    crate::linalg::normalized(r, a.norm())
}

fn second_moment(c: &CauchyTensor, n: &Vec3) -> Mat3 {
    let comp = c.components();
    Mat3::from_fn(|a, b| {
        let mut acc = 0.0;
        for k in 0..3 {
            for l in 0..3 {
                acc += comp[a][b][k][l] * n[k] * n[l];
            }
        }
        acc
    })
}

fn newton_longitudinal(c: &CauchyTensor, seed: Vec3, cfg: &LongitudinalConfig) -> Option<(Vec3, f64)> {
    let mut n = seed;
    for _ in 0..cfg.max_iterations {
        let a = cauchy_acoustic(c, &n);
        let an = a * n;
        let f = n.dot(&an);
        let norm_a = a.norm();
        if norm_a == 0.0 {
            return None;
        }
        let res = (an - n * f).norm() / norm_a;
        if res < 1e-15 {
            break;
        }
        let (t, s) = tangent_frame(&n);
        let h = second_moment(c, &n) * 4.0 + a * 8.0 - Mat3::identity() * (4.0 * f);
        let (htt, hts, hss) = (t.dot(&(h * t)), t.dot(&(h * s)), s.dot(&(h * s)));
        let (gt, gs) = (4.0 * t.dot(&an), 4.0 * s.dot(&an));
        let det = htt * hss - hts * hts;
        if det.abs() < 1e-14 * norm_a * norm_a {
            break;
        }
        let mut dt = -(hss * gt - hts * gs) / det;
        let mut ds = -(-hts * gt + htt * gs) / det;
        let len = dt.hypot(ds);
        if len > 0.2 {
            dt *= 0.2 / len;
            ds *= 0.2 / len;
        }
        n = (n + t * dt + s * ds).normalize();
    }
    let r = longitudinal_residual(c, &n);
    (r < cfg.tolerance).then_some((canonical_sign(&n), r))
}

/// Directions along which `A_C(n) n` is parallel to `n`.
pub fn longitudinal_directions(c: &CauchyTensor, cfg: &LongitudinalConfig) -> LongitudinalSearch {
    let mut seeds = fibonacci_hemisphere(cfg.seeds);
    seeds.extend(canonical_directions());
    if c.scale() == 0.0 {
        return LongitudinalSearch {
            directions: Vec::new(),
            residuals: Vec::new(),
            all_longitudinal: false,
            note: Some("zero Cauchy tensor: acoustic tensor vanishes identically".into()),
        };
    }
    let all_aligned = seeds
        .iter()
        .all(|n| longitudinal_residual(c, n) < cfg.tolerance);
    let candidates: Vec<(Vec3, f64)> = if all_aligned {
        seeds
            .iter()
            .map(|n| (canonical_sign(n), longitudinal_residual(c, n)))
            .collect()
    } else {
        seeds
            .par_iter()
            .filter_map(|s| newton_longitudinal(c, *s, cfg))
            .collect()
    };
    let mut directions: Vec<Vec3> = Vec::new();
    let mut residuals = Vec::new();
    for (n, r) in candidates {
        if directions.iter().all(|d| d.cross(&n).norm() >= 1e-3) {
            directions.push(n);
            residuals.push(r);
        }
    }
    let note = if all_aligned {
        Some("all directions longitudinal".to_string())
    } else if directions.len() < 3 {
        Some(format!(
            "only {} longitudinal directions found at {} seeds",
            directions.len(),
            cfg.seeds
        ))
    } else {
        None
    };
    LongitudinalSearch {
        directions: directions.iter().map(to_array).collect(),
        residuals,
        all_longitudinal: all_aligned,
        note,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsotropicDispersion {
    pub shear_velocity_sq: f64,
    /// absent when the squared velocity is negative
    pub shear_velocity: Option<f64>,
    pub omega_sq: f64,
    /// `|k|` of the imaginary cut-off `k = +-i sqrt(mu/eta)`
    pub cutoff_wavenumber: Option<f64>,
}

/// Shear-wave dispersion of an isotropic couple-stress solid.
pub fn isotropic_dispersion(mu: f64, eta: f64, rho: f64, k: f64) -> Result<IsotropicDispersion> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::NonPositiveDensity(rho));
    }
    let v_sq = (mu + eta * k * k) / rho;
    Ok(IsotropicDispersion {
        shear_velocity_sq: v_sq,
        shear_velocity: (v_sq >= 0.0).then(|| v_sq.sqrt()),
        omega_sq: k * k * v_sq,
        cutoff_wavenumber: (eta > 0.0 && mu >= 0.0).then(|| (mu / eta).sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::levi_civita;

    fn rel(a: &Mat3, b: &Mat3) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn isotropic_closed_forms() {
        let n = Vec3::new(0.2, -0.7, 0.4).normalize();
        let nn = n * n.transpose();
        let ac = acoustic_cauchy(&CauchyTensor::isotropic(1.0, 1.0), &n).unwrap();
        assert!(rel(&ac, &(nn * 3.0 + (Mat3::identity() - nn))) < 1e-14);
        let ab = acoustic_cosserat(&CosseratTensor::isotropic(0.5, 0.3), &n).unwrap();
        assert!(rel(&ab, &((Mat3::identity() - nn) * 0.5)) < 1e-14);
        let e = sym3_eigen(&ab);
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 0.5).abs() < 1e-14 && (e.values[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn brute_force_cosserat_contraction() {
        let (b, _) = CosseratTensor::project(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                std::array::from_fn(|k| std::array::from_fn(|l| ((i * 27 + j * 9 + k * 3 + l) as f64 * 0.7).sin()))
            })
        }))
        .unwrap();
        let n = Vec3::new(0.6, 0.0, 0.8);
        let mut oracle = Mat3::zeros();
        for p in 0..3 {
            for q in 0..3 {
                for k in 0..3 {
                    for s in 0..3 {
                        for m in 0..3 {
                            for nn in 0..3 {
                                let e = levi_civita(p, q, k) * levi_civita(s, m, nn);
                                if e == 0.0 {
                                    continue;
                                }
                                for r in 0..3 {
                                    for t in 0..3 {
                                        oracle[(q, nn)] += 0.25 * e * n[m] * n[p] * n[t] * n[r] * b.get(r, k, t, s);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let ab = acoustic_cosserat(&b, &n).unwrap();
        assert!(rel(&ab, &oracle) < 1e-13);
        assert!((ab * n).norm() < 1e-14 * ab.norm());
    }

    #[test]
    fn zero_and_nonunit() {
        assert_eq!(acoustic_cauchy(&CauchyTensor::zero(), &Vec3::z()).unwrap(), Mat3::zeros());
        assert!(acoustic_cauchy(&CauchyTensor::zero(), &Vec3::new(1.0, 1.0, 0.0)).is_err());
        assert!(acoustic_cosserat(&CosseratTensor::zero(), &Vec3::new(0.5, 0.0, 0.0)).is_err());
    }

    #[test]
    fn total_tensor_in_frame() {
        let n = Vec3::new(1.0, 2.0, 2.0) / 3.0;
        let pair = AcousticPair::new(&CauchyTensor::isotropic(1.0, 1.0), &CosseratTensor::isotropic(0.5, 0.0), &n).unwrap();
        let (t, s) = tangent_frame(&n);
        let r = Mat3::from_columns(&[n, t, s]);
        let framed = r.transpose() * pair.total(2.0) * r;
        assert!(rel(&framed, &(Mat3::identity() * 12.0)) < 1e-14);
        assert_eq!(pair.total(0.0), Mat3::zeros());
        assert!(rel(&pair.total(1.0), &(pair.cauchy + pair.cosserat)) < 1e-15);
    }

    #[test]
    fn wave_solve_isotropic() {
        let n = Vec3::new(0.0, 0.6, 0.8);
        let sol = wave_solve(&CauchyTensor::isotropic(1.0, 1.0), &CosseratTensor::isotropic(1.0, 0.0), 1.0, &n, 2.0).unwrap();
        let w: Vec<f64> = sol.branches.iter().map(|b| b.omega_sq).collect();
        assert!((w[0] - 20.0).abs() < 1e-12 && (w[1] - 20.0).abs() < 1e-12 && (w[2] - 12.0).abs() < 1e-12);
        let p = sol.longitudinal().unwrap();
        assert!((p.phase_velocity.unwrap() - 3f64.sqrt()).abs() < 1e-14);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let (a, b) = (Vec3::from(sol.branches[i].amplitude), Vec3::from(sol.branches[j].amplitude));
                assert!(a.dot(&b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn wave_solve_presets() {
        let n = Vec3::x();
        let pc = wave_solve(&CauchyTensor::zero(), &CosseratTensor::isotropic(1.0, 0.0), 1.0, &n, 3.0).unwrap();
        assert!(pc.longitudinal().unwrap().omega_sq.abs() < 1e-14);
        assert!((pc.branches[0].phase_velocity.unwrap() - 3.0).abs() < 1e-14);
        let sd = wave_solve(&CauchyTensor::isotropic(1.0, 0.0), &CosseratTensor::isotropic(1.0, 0.0), 1.0, &n, 3.0).unwrap();
        assert!((sd.longitudinal().unwrap().phase_velocity.unwrap() - 1.0).abs() < 1e-14);
        assert!(wave_solve(&CauchyTensor::zero(), &CosseratTensor::zero(), 0.0, &n, 1.0).is_err());
    }

    #[test]
    fn dispersion_examples() {
        let d = isotropic_dispersion(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((d.shear_velocity.unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.omega_sq, 20.0);
        assert_eq!(d.cutoff_wavenumber, Some(1.0));
        let d0 = isotropic_dispersion(1.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!((d0.shear_velocity, d0.omega_sq), (Some(1.0), 0.0));
        let lin = isotropic_dispersion(0.0, 1.0, 1.0, 7.0).unwrap();
        assert!((lin.shear_velocity.unwrap() - 7.0).abs() < 1e-15);
        assert!(isotropic_dispersion(-1.0, 0.0, 1.0, 1.0).unwrap().shear_velocity.is_none());
    }

    #[test]
    fn longitudinal_isotropic_and_cubic() {
        let iso = longitudinal_directions(&CauchyTensor::isotropic(1.0, 1.0), &LongitudinalConfig::default());
        assert!(iso.all_longitudinal);
        assert_eq!(iso.note.as_deref(), Some("all directions longitudinal"));

        // cubic: C11 = 3, C12 = 1, C44 = 2
        let mut r = [[0.0; 6]; 6];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = if i == j { 3.0 } else { 1.0 };
            }
            r[i + 3][i + 3] = 4.0 * 2.0;
        }
        let cubic = CauchyTensor::from_reduced(&r).unwrap();
        let found = longitudinal_directions(&cubic, &LongitudinalConfig::default());
        assert!(!found.all_longitudinal);
        let has = |v: Vec3| {
            let v = v.normalize();
            found.directions.iter().any(|d| Vec3::from(*d).cross(&v).norm() < 1e-6)
        };
        assert!(has(Vec3::x()) && has(Vec3::y()) && has(Vec3::z()));
        assert!(has(Vec3::new(1.0, 1.0, 1.0)));
        assert!(has(Vec3::new(1.0, 1.0, 0.0)));
        assert!(found.residuals.iter().all(|r| *r < 1e-8));
    }
}
