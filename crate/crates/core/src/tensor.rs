//! Fourth-order elasticity tensors, kinematics and the constitutive law.
//!
//! Both tensors are stored as full `3x3x3x3` arrays. Reduced matrix forms exist
//! only for I/O and eigen-solves.
//!
//! * Strain 6-vectors are ordered `(e11, e22, e33, e23, e13, e12)` with tensor
//!   components; the reduced 6x6 Cauchy matrix carries the factors `w_I w_J`
//!   (`w = 1` for normal, `2` for shear entries) so that `e . M e` equals the
//!   tensorial quadratic form.
//! * Curvature 9-vectors are ordered `(k11, k12, k13, k21, k22, k23, k31, k32, k33)`.

use nalgebra::{DMatrix, SMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::linalg::{levi_civita, Mat3, Vec3};

pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

pub type Matrix6 = SMatrix<f64, 6, 6>;
pub type Matrix8 = SMatrix<f64, 8, 8>;
pub type Matrix9 = SMatrix<f64, 9, 9>;

/// Default relative tolerance used by the verdicts.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

const VOIGT: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];
const STRAIN_WEIGHT: [f64; 6] = [1.0, 1.0, 1.0, 2.0, 2.0, 2.0];

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

fn zero4() -> Tensor4 {
    [[[[0.0; 3]; 3]; 3]; 3]
}

fn flat(t: &Tensor4) -> impl Iterator<Item = f64> + '_ {
    t.iter().flatten().flatten().flatten().copied()
}

fn max_abs4(t: &Tensor4) -> f64 {
    flat(t).fold(0.0, |a, x| a.max(x.abs()))
}

fn mandel_weight(i: usize) -> f64 {
    if i < 3 {
        1.0
    } else {
        std::f64::consts::SQRT_2
    }
}

/// Orthonormal basis of the 8-dimensional trace-free subspace of 3x3 matrices.
pub fn deviatoric_basis() -> [Mat3; 8] {
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let r6 = 1.0 / 6f64.sqrt();
    let mut basis = [Mat3::zeros(); 8];
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for (a, &(i, j)) in pairs.iter().enumerate() {
        basis[a][(i, j)] = r2;
        basis[a][(j, i)] = r2;
        basis[a + 3][(i, j)] = r2;
        basis[a + 3][(j, i)] = -r2;
    }
    basis[6] = Mat3::from_diagonal(&Vec3::new(r2, -r2, 0.0));
    basis[7] = Mat3::from_diagonal(&Vec3::new(r6, r6, -2.0 * r6));
    basis
}

/// Classical (Cauchy) elasticity tensor with major and minor symmetries.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyTensor {
    c: Tensor4,
}

impl CauchyTensor {
    pub fn zero() -> Self {
        Self { c: zero4() }
    }

    pub fn isotropic(lambda: f64, mu: f64) -> Self {
        let mut c = zero4();
        for (p, cp) in c.iter_mut().enumerate() {
            for (q, cq) in cp.iter_mut().enumerate() {
                for (m, cm) in cq.iter_mut().enumerate() {
                    for (n, v) in cm.iter_mut().enumerate() {
                        *v = lambda * delta(p, q) * delta(m, n)
                            + mu * (delta(p, m) * delta(q, n) + delta(p, n) * delta(q, m));
                    }
                }
            }
        }
        Self { c }
    }

    /// Builds from raw components, averaging over the symmetry group
    /// (`pqmn = qpmn = pqnm = mnpq`).
    pub fn from_components(raw: Tensor4) -> Result<Self> {
        ensure_finite("Cauchy tensor", flat(&raw))?;
        let mut c = zero4();
        for p in 0..3 {
            for q in 0..3 {
                for m in 0..3 {
                    for n in 0..3 {
                        c[p][q][m][n] = (raw[p][q][m][n]
                            + raw[q][p][m][n]
                            + raw[p][q][n][m]
                            + raw[q][p][n][m]
                            + raw[m][n][p][q]
                            + raw[n][m][p][q]
                            + raw[m][n][q][p]
                            + raw[n][m][q][p])
                            / 8.0;
                    }
                }
            }
        }
        Ok(Self { c })
    }

    /// Builds from the reduced 6x6 matrix (tensor-strain convention, see module docs).
    pub fn from_reduced(m: &[[f64; 6]; 6]) -> Result<Self> {
        ensure_finite("reduced Cauchy matrix", m.iter().flatten().copied())?;
        let mut c = zero4();
        for (a, &(i, j)) in VOIGT.iter().enumerate() {
            for (b, &(k, l)) in VOIGT.iter().enumerate() {
                let v = 0.5 * (m[a][b] + m[b][a]) / (STRAIN_WEIGHT[a] * STRAIN_WEIGHT[b]);
                for (p, q) in [(i, j), (j, i)] {
                    for (r, s) in [(k, l), (l, k)] {
                        c[p][q][r][s] = v;
                    }
                }
            }
        }
        Ok(Self { c })
    }

    pub fn to_reduced(&self) -> [[f64; 6]; 6] {
        let mut out = [[0.0; 6]; 6];
        for (a, &(i, j)) in VOIGT.iter().enumerate() {
            for (b, &(k, l)) in VOIGT.iter().enumerate() {
                out[a][b] = STRAIN_WEIGHT[a] * STRAIN_WEIGHT[b] * self.c[i][j][k][l];
            }
        }
        out
    }

    /// Matrix in the orthonormal (Mandel) basis of symmetric tensors.
    pub fn mandel(&self) -> Matrix6 {
        Matrix6::from_fn(|a, b| {
            let (i, j) = VOIGT[a];
            let (k, l) = VOIGT[b];
            mandel_weight(a) * mandel_weight(b) * self.c[i][j][k][l]
        })
    }

    pub fn from_mandel(m: &Matrix6) -> Result<Self> {
        let mut r = [[0.0; 6]; 6];
        for (a, row) in r.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v = m[(a, b)] / (mandel_weight(a) * mandel_weight(b))
                    * STRAIN_WEIGHT[a]
                    * STRAIN_WEIGHT[b];
            }
        }
        Self::from_reduced(&r)
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, m: usize, n: usize) -> f64 {
        self.c[p][q][m][n]
    }

    pub fn components(&self) -> &Tensor4 {
        &self.c
    }

    /// Largest absolute component.
    pub fn scale(&self) -> f64 {
        max_abs4(&self.c)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut c = self.c;
        c.iter_mut()
            .flatten()
            .flatten()
            .flatten()
            .for_each(|v| *v *= factor);
        Self { c }
    }

    /// `tau_pq = C_pqmn e_mn`.
    pub fn apply(&self, e: &Mat3) -> Mat3 {
        Mat3::from_fn(|p, q| {
            let mut acc = 0.0;
            for m in 0..3 {
                for n in 0..3 {
                    acc += self.c[p][q][m][n] * e[(m, n)];
                }
            }
            acc
        })
    }

    pub fn quadratic_form(&self, e: &Mat3) -> f64 {
        self.apply(e).component_mul(e).sum()
    }
}

/// Named entries of an orthotropic couple-stress tensor. The remaining
/// non-zero components follow from major symmetry and the trace constraints.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrthotropicModuli {
    pub b1111: f64,
    pub b1122: f64,
    pub b1212: f64,
    pub b1221: f64,
    pub b1313: f64,
    pub b1331: f64,
    pub b2121: f64,
    pub b2222: f64,
    pub b2323: f64,
    pub b2332: f64,
    pub b3131: f64,
    pub b3232: f64,
}

/// Couple-stress tensor: major symmetry, trace-free on both index pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CosseratTensor {
    b: Tensor4,
}

impl CosseratTensor {
    pub fn zero() -> Self {
        Self { b: zero4() }
    }

    pub fn isotropic(eta: f64, eta_prime: f64) -> Self {
        let mut b = zero4();
        let sph = 4.0 * (eta + eta_prime) / 3.0;
        for (i, bi) in b.iter_mut().enumerate() {
            for (j, bj) in bi.iter_mut().enumerate() {
                for (k, bk) in bj.iter_mut().enumerate() {
                    for (l, v) in bk.iter_mut().enumerate() {
                        *v = 4.0 * eta * delta(i, k) * delta(j, l)
                            + 4.0 * eta_prime * delta(i, l) * delta(j, k)
                            - sph * delta(i, j) * delta(k, l);
                    }
                }
            }
        }
        Self { b }
    }

    pub fn orthotropic(o: &OrthotropicModuli) -> Result<Self> {
        let mut b = zero4();
        let b1133 = -(o.b1111 + o.b1122);
        let b2233 = -(o.b1122 + o.b2222);
        let b3333 = -(b1133 + b2233);
        let diag = [
            [o.b1111, o.b1122, b1133],
            [o.b1122, o.b2222, b2233],
            [b1133, b2233, b3333],
        ];
        for i in 0..3 {
            for j in 0..3 {
                b[i][i][j][j] = diag[i][j];
            }
        }
        let mut put = |i: usize, j: usize, direct_ij: f64, direct_ji: f64, cross: f64| {
            b[i][j][i][j] = direct_ij;
            b[j][i][j][i] = direct_ji;
            b[i][j][j][i] = cross;
            b[j][i][i][j] = cross;
        };
        put(0, 1, o.b1212, o.b2121, o.b1221);
        put(0, 2, o.b1313, o.b3131, o.b1331);
        put(1, 2, o.b2323, o.b3232, o.b2332);
        let (t, _) = Self::project(b)?;
        Ok(t)
    }

    /// Projects raw components onto the admissible subspace (major symmetry,
    /// trace-free on both pairs). Returns the tensor and the largest absolute
    /// change made to any component.
    pub fn project(raw: Tensor4) -> Result<(Self, f64)> {
        ensure_finite("Cosserat tensor", flat(&raw))?;
        let mut tr_left = [[0.0; 3]; 3];
        let mut tr_right = [[0.0; 3]; 3];
        let mut tr_both = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    tr_left[k][l] += raw[i][i][k][l];
                    tr_right[k][l] += raw[k][l][i][i];
                }
                tr_both += raw[i][i][k][k];
            }
        }
        let mut dev = zero4();
        for p in 0..3 {
            for q in 0..3 {
                for r in 0..3 {
                    for s in 0..3 {
                        dev[p][q][r][s] = raw[p][q][r][s]
                            - delta(p, q) * tr_left[r][s] / 3.0
                            - delta(r, s) * tr_right[p][q] / 3.0
                            + delta(p, q) * delta(r, s) * tr_both / 9.0;
                    }
                }
            }
        }
        let mut b = zero4();
        let mut residual: f64 = 0.0;
        for p in 0..3 {
            for q in 0..3 {
                for r in 0..3 {
                    for s in 0..3 {
                        let v = 0.5 * (dev[p][q][r][s] + dev[r][s][p][q]);
                        residual = residual.max((v - raw[p][q][r][s]).abs());
                        b[p][q][r][s] = v;
                    }
                }
            }
        }
        Ok((Self { b }, residual))
    }

    pub fn from_components(raw: Tensor4) -> Result<Self> {
        Self::project(raw).map(|(t, _)| t)
    }

    /// Builds from the 9x9 matrix acting on curvature 9-vectors; projected.
    pub fn from_reduced(m: &[[f64; 9]; 9]) -> Result<(Self, f64)> {
        let mut raw = zero4();
        for a in 0..9 {
            for b in 0..9 {
                raw[a / 3][a % 3][b / 3][b % 3] = m[a][b];
            }
        }
        Self::project(raw)
    }

    pub fn to_reduced(&self) -> [[f64; 9]; 9] {
        let mut out = [[0.0; 9]; 9];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v = self.b[a / 3][a % 3][b / 3][b % 3];
            }
        }
        out
    }

    /// Matrix of the form on the orthonormal trace-free basis.
    pub fn deviatoric_matrix(&self) -> Matrix8 {
        let basis = deviatoric_basis();
        let images: Vec<Mat3> = basis.iter().map(|e| self.apply(e)).collect();
        Matrix8::from_fn(|a, b| basis[a].component_mul(&images[b]).sum())
    }

    pub fn from_deviatoric(m: &Matrix8) -> Result<Self> {
        let basis = deviatoric_basis();
        let mut raw = zero4();
        for a in 0..8 {
            for b in 0..8 {
                let w = 0.5 * (m[(a, b)] + m[(b, a)]);
                if w == 0.0 {
                    continue;
                }
                for p in 0..3 {
                    for q in 0..3 {
                        for r in 0..3 {
                            for s in 0..3 {
                                raw[p][q][r][s] += w * basis[a][(p, q)] * basis[b][(r, s)];
                            }
                        }
                    }
                }
            }
        }
        Self::from_components(raw)
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.b[p][q][r][s]
    }

    pub fn components(&self) -> &Tensor4 {
        &self.b
    }

    pub fn scale(&self) -> f64 {
        max_abs4(&self.b)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut b = self.b;
        b.iter_mut()
            .flatten()
            .flatten()
            .flatten()
            .for_each(|v| *v *= factor);
        Self { b }
    }

    /// `m_pq = B_pqrs k_rs`.
    pub fn apply(&self, k: &Mat3) -> Mat3 {
        Mat3::from_fn(|p, q| {
            let mut acc = 0.0;
            for r in 0..3 {
                for s in 0..3 {
                    acc += self.b[p][q][r][s] * k[(r, s)];
                }
            }
            acc
        })
    }

    pub fn quadratic_form(&self, k: &Mat3) -> f64 {
        self.apply(k).component_mul(k).sum()
    }

    /// Largest deviation from major symmetry and from the trace constraints.
    pub fn symmetry_residual(&self) -> (f64, f64) {
        let mut major: f64 = 0.0;
        let mut trace: f64 = 0.0;
        for p in 0..3 {
            for q in 0..3 {
                let mut tl = 0.0;
                let mut tr = 0.0;
                for i in 0..3 {
                    tl += self.b[i][i][p][q];
                    tr += self.b[p][q][i][i];
                    for j in 0..3 {
                        major = major.max((self.b[p][q][i][j] - self.b[i][j][p][q]).abs());
                    }
                }
                trace = trace.max(tl.abs()).max(tr.abs());
            }
        }
        (major, trace)
    }
}

/// Strain, rotation and curvature of a displacement field at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState {
    pub strain: Mat3,
    pub rotation: Vec3,
    pub curvature: Mat3,
}

impl std::ops::Add for KinematicState {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            strain: self.strain + o.strain,
            rotation: self.rotation + o.rotation,
            curvature: self.curvature + o.curvature,
        }
    }
}

impl std::ops::Mul<f64> for KinematicState {
    type Output = Self;
    fn mul(self, a: f64) -> Self {
        Self {
            strain: self.strain * a,
            rotation: self.rotation * a,
            curvature: self.curvature * a,
        }
    }
}

/// `grad_u[(i, j)] = du_i/dx_j`; `grad_grad_u[i][j][k] = d2u_i/dx_j dx_k`.
pub type SecondGradient = [[[f64; 3]; 3]; 3];

/// Strain `e_pq = (u_p,q + u_q,p)/2`, rotation `w_q = e_qpk u_k,p / 2`,
/// curvature `k_pq = w_q,p`.
pub fn kinematics(grad_u: &Mat3, grad_grad_u: &SecondGradient) -> Result<KinematicState> {
    ensure_finite("displacement gradient", grad_u.iter().copied())?;
    ensure_finite(
        "second displacement gradient",
        grad_grad_u.iter().flatten().flatten().copied(),
    )?;
    let scale = grad_grad_u
        .iter()
        .flatten()
        .flatten()
        .fold(0.0f64, |a, x| a.max(x.abs()));
    let mut asym: f64 = 0.0;
    for gi in grad_grad_u {
        for j in 0..3 {
            for k in 0..3 {
                asym = asym.max((gi[j][k] - gi[k][j]).abs());
            }
        }
    }
    if asym > 1e-12 * scale.max(1.0) {
        return Err(Error::AsymmetricSecondGradient { residual: asym });
    }
    let strain = (grad_u + grad_u.transpose()) * 0.5;
    let rotation = Vec3::from_fn(|q, _| {
        let mut acc = 0.0;
        for p in 0..3 {
            for k in 0..3 {
                acc += levi_civita(q, p, k) * grad_u[(k, p)];
            }
        }
        0.5 * acc
    });
    let curvature = Mat3::from_fn(|p, q| {
        let mut acc = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                acc += levi_civita(q, j, k) * grad_grad_u[k][j][p];
            }
        }
        0.5 * acc
    });
    Ok(KinematicState {
        strain,
        rotation,
        curvature,
    })
}

/// Stress measures at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressState {
    /// symmetric part `tau = C e`
    pub tau: Mat3,
    /// deviatoric couple stress `m = B k` (spherical part taken as zero)
    pub couple: Mat3,
    /// skew-symmetric part `alpha_pq = -e_pqk (m_rk,r + Y_k) / 2`
    pub alpha: Mat3,
    /// total stress `tau + alpha`
    pub sigma: Mat3,
}

/// `div_m[k] = m_rk,r`; `body_moment` is `Y`.
pub fn constitutive(
    c: &CauchyTensor,
    b: &CosseratTensor,
    state: &KinematicState,
    div_m: &Vec3,
    body_moment: &Vec3,
) -> StressState {
    let tau = c.apply(&state.strain);
    let couple = b.apply(&state.curvature);
    let w = div_m + body_moment;
    let alpha = Mat3::from_fn(|p, q| {
        -0.5 * (0..3).map(|k| levi_civita(p, q, k) * w[k]).sum::<f64>()
    });
    StressState {
        tau,
        couple,
        alpha,
        sigma: tau + alpha,
    }
}

/// Outcome of a positive-definiteness check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdCheck {
    pub holds: bool,
    pub min_eigenvalue: f64,
    pub spectral_norm: f64,
    /// `min_eigenvalue / spectral_norm` (zero for a zero tensor)
    pub margin: f64,
    /// eigen-tensor of the smallest eigenvalue
    pub witness: [[f64; 3]; 3],
}

fn pd_from_spectrum(m: DMatrix<f64>, basis: impl Fn(usize) -> Mat3, tol: f64) -> PdCheck {
    let sym = (&m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let (imin, min) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));
    let norm = eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let v = eig.eigenvectors.column(imin);
    let mut w = Mat3::zeros();
    for a in 0..v.len() {
        w += basis(a) * v[a];
    }
    let margin = crate::linalg::normalized(min, norm);
    PdCheck {
        holds: margin > tol,
        min_eigenvalue: min,
        spectral_norm: norm,
        margin,
        witness: crate::linalg::mat_to_array(&w),
    }
}

/// Positive definiteness of `e . C e` on symmetric tensors.
pub fn check_pd_cauchy(c: &CauchyTensor, tol: f64) -> PdCheck {
    let m = c.mandel();
    pd_from_spectrum(
        DMatrix::from_fn(6, 6, |a, b| m[(a, b)]),
        |a| {
            let (i, j) = VOIGT[a];
            let mut e = Mat3::zeros();
            if i == j {
                e[(i, i)] = 1.0;
            } else {
                e[(i, j)] = std::f64::consts::FRAC_1_SQRT_2;
                e[(j, i)] = std::f64::consts::FRAC_1_SQRT_2;
            }
            e
        },
        tol,
    )
}

/// Positive definiteness of `k . B k` on trace-free tensors.
pub fn check_pd_cosserat(b: &CosseratTensor, tol: f64) -> PdCheck {
    let basis = deviatoric_basis();
    let m = b.deviatoric_matrix();
    pd_from_spectrum(DMatrix::from_fn(8, 8, |a, b| m[(a, b)]), |a| basis[a], tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    fn random_raw(seed: &mut u64) -> Tensor4 {
        let mut t = zero4();
        t.iter_mut()
            .flatten()
            .flatten()
            .flatten()
            .for_each(|v| *v = lcg(seed));
        t
    }

    #[test]
    fn isotropic_cauchy_entries() {
        let c = CauchyTensor::isotropic(1.0, 1.0);
        assert_eq!(c.get(0, 0, 0, 0), 3.0);
        assert_eq!(c.get(0, 0, 1, 1), 1.0);
        assert_eq!(c.get(0, 1, 0, 1), 1.0);
        let pd = check_pd_cauchy(&c, DEFAULT_REL_TOL);
        assert!(pd.holds);
        assert!((pd.min_eigenvalue - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cauchy_pd_examples() {
        assert!(!check_pd_cauchy(&CauchyTensor::isotropic(1.0, 0.0), DEFAULT_REL_TOL).holds);
        // 3 lambda + 2 mu = -1
        assert!(!check_pd_cauchy(&CauchyTensor::isotropic(-1.0, 1.0), DEFAULT_REL_TOL).holds);
    }

    #[test]
    fn isotropic_cosserat_entries() {
        let (eta, etap) = (1.0, 0.5);
        let b = CosseratTensor::isotropic(eta, etap);
        assert!((b.get(0, 0, 0, 0) - 8.0 / 3.0 * (eta + etap)).abs() < 1e-14);
        assert!((b.get(0, 0, 1, 1) + 4.0 / 3.0 * (eta + etap)).abs() < 1e-14);
        assert_eq!(b.get(0, 1, 0, 1), 4.0 * eta);
        assert_eq!(b.get(0, 1, 1, 0), 4.0 * etap);
        let (major, trace) = b.symmetry_residual();
        assert!(major < 1e-14 && trace < 1e-14);
    }

    #[test]
    fn orthotropic_matches_isotropic() {
        let (eta, etap) = (1.0, 0.5);
        let d = 8.0 / 3.0 * (eta + etap);
        let o = -4.0 / 3.0 * (eta + etap);
        let moduli = OrthotropicModuli {
            b1111: d,
            b1122: o,
            b1212: 4.0 * eta,
            b1221: 4.0 * etap,
            b1313: 4.0 * eta,
            b1331: 4.0 * etap,
            b2121: 4.0 * eta,
            b2222: d,
            b2323: 4.0 * eta,
            b2332: 4.0 * etap,
            b3131: 4.0 * eta,
            b3232: 4.0 * eta,
        };
        let b = CosseratTensor::orthotropic(&moduli).unwrap();
        let iso = CosseratTensor::isotropic(eta, etap);
        for (x, y) in flat(b.components()).zip(flat(iso.components())) {
            assert!((x - y).abs() < 1e-14);
        }
        let (major, trace) = b.symmetry_residual();
        assert!(major < 1e-14 && trace < 1e-14);
    }

    #[test]
    fn cosserat_pd_isotropic_grid() {
        for i in 0..20 {
            for j in 0..20 {
                let eta = -1.0 + 2.0 * i as f64 / 19.0;
                let etap = -1.0 + 2.0 * j as f64 / 19.0 + 0.013;
                let b = CosseratTensor::isotropic(eta, etap);
                let pd = check_pd_cosserat(&b, DEFAULT_REL_TOL);
                let expected = eta > 0.0 && eta + etap > 0.0 && eta - etap > 0.0;
                assert_eq!(pd.holds, expected, "eta={eta} eta'={etap}");
                let lo = (4.0 * (eta + etap)).min(4.0 * (eta - etap));
                assert!((pd.min_eigenvalue - lo).abs() < 1e-12);
            }
        }
        assert!(check_pd_cosserat(&CosseratTensor::isotropic(1.0, 0.0), DEFAULT_REL_TOL).holds);
        assert!(!check_pd_cosserat(&CosseratTensor::isotropic(1.0, -1.0), DEFAULT_REL_TOL).holds);
    }

    #[test]
    fn reduced_cauchy_form_equality() {
        let mut seed = 7;
        let c = CauchyTensor::from_components(random_raw(&mut seed)).unwrap();
        let r = c.to_reduced();
        let back = CauchyTensor::from_reduced(&r).unwrap();
        for (x, y) in flat(c.components()).zip(flat(back.components())) {
            assert!((x - y).abs() < 1e-15);
        }
        let e = Mat3::new(0.3, 0.2, -0.1, 0.2, -0.5, 0.7, -0.1, 0.7, 0.4);
        let v = [
            e[(0, 0)],
            e[(1, 1)],
            e[(2, 2)],
            e[(1, 2)],
            e[(0, 2)],
            e[(0, 1)],
        ];
        let mut form = 0.0;
        for a in 0..6 {
            for b in 0..6 {
                form += v[a] * r[a][b] * v[b];
            }
        }
        assert!((form - c.quadratic_form(&e)).abs() < 1e-13);
    }

    #[test]
    fn mandel_round_trip() {
        let mut seed = 11;
        let c = CauchyTensor::from_components(random_raw(&mut seed)).unwrap();
        let back = CauchyTensor::from_mandel(&c.mandel()).unwrap();
        for (x, y) in flat(c.components()).zip(flat(back.components())) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_reports_residual() {
        let mut seed = 3;
        let (b, res) = CosseratTensor::project(random_raw(&mut seed)).unwrap();
        assert!(res > 0.0);
        let (major, trace) = b.symmetry_residual();
        assert!(major < 1e-14 && trace < 1e-14);
        let (again, res2) = CosseratTensor::project(*b.components()).unwrap();
        assert!(res2 < 1e-15);
        for (x, y) in flat(again.components()).zip(flat(b.components())) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn deviatoric_round_trip() {
        let mut seed = 5;
        let b = CosseratTensor::from_components(random_raw(&mut seed)).unwrap();
        let back = CosseratTensor::from_deviatoric(&b.deviatoric_matrix()).unwrap();
        for (x, y) in flat(b.components()).zip(flat(back.components())) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn reduced_cosserat_round_trip() {
        let b = CosseratTensor::isotropic(1.0, 0.3);
        let (back, res) = CosseratTensor::from_reduced(&b.to_reduced()).unwrap();
        assert!(res < 1e-15);
        assert_eq!(back, b);
    }

    #[test]
    fn non_finite_rejected() {
        let mut raw = zero4();
        raw[0][0][0][0] = f64::NAN;
        assert!(CauchyTensor::from_components(raw).is_err());
        assert!(CosseratTensor::project(raw).is_err());
    }

    #[test]
    fn antiplane_kinematics() {
        // w = x y
        let mut g = Mat3::zeros();
        g[(2, 0)] = 0.3; // y at the evaluation point
        g[(2, 1)] = 0.2; // x
        let mut gg = [[[0.0; 3]; 3]; 3];
        gg[2][0][1] = 1.0;
        gg[2][1][0] = 1.0;
        let s = kinematics(&g, &gg).unwrap();
        assert!((s.strain[(0, 2)] - 0.15).abs() < 1e-15);
        assert!((s.curvature[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((s.curvature[(1, 1)] + 0.5).abs() < 1e-15);
        assert!(s.curvature[(0, 1)].abs() < 1e-15);
        assert!(s.curvature.trace().abs() < 1e-15);
    }

    #[test]
    fn rigid_rotation_sign() {
        // u = (-y, x, 0): unit rotation about z
        let g = Mat3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let s = kinematics(&g, &[[[0.0; 3]; 3]; 3]).unwrap();
        assert!((s.rotation - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
        assert_eq!(s.strain, Mat3::zeros());
    }

    #[test]
    fn asymmetric_second_gradient_rejected() {
        let mut gg = [[[0.0; 3]; 3]; 3];
        gg[0][0][1] = 1.0;
        assert!(matches!(
            kinematics(&Mat3::zeros(), &gg),
            Err(Error::AsymmetricSecondGradient { .. })
        ));
    }

    #[test]
    fn skew_stress_from_body_moment() {
        let c = CauchyTensor::isotropic(1.0, 1.0);
        let b = CosseratTensor::isotropic(1.0, 0.0);
        let state = KinematicState {
            strain: Mat3::zeros(),
            rotation: Vec3::zeros(),
            curvature: Mat3::zeros(),
        };
        let out = constitutive(&c, &b, &state, &Vec3::zeros(), &Vec3::new(0.0, 0.0, 2.0));
        assert_eq!(out.alpha[(0, 1)], -1.0);
        assert_eq!(out.alpha[(1, 0)], 1.0);
        let sym = constitutive(&c, &b, &state, &Vec3::new(0.0, 0.0, -2.0), &Vec3::new(0.0, 0.0, 2.0));
        assert_eq!(sym.sigma, sym.sigma.transpose());
    }

    #[test]
    fn uniaxial_strain_stress() {
        let c = CauchyTensor::isotropic(1.0, 1.0);
        let mut e = Mat3::zeros();
        e[(0, 0)] = 1e-3;
        let tau = c.apply(&e);
        assert!((tau[(0, 0)] - 3e-3).abs() < 1e-18);
        assert!((tau[(1, 1)] - 1e-3).abs() < 1e-18);
        assert!((tau[(2, 2)] - 1e-3).abs() < 1e-18);
    }
}
