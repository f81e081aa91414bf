//! Jump conditions across a planar discontinuity surface.
//!
//! Surface derivatives act on a single tangential Fourier mode, `D_m -> i kappa_m`.
//! Unknowns are the jumps `g1, g2, g3` of the first three normal derivatives of
//! the displacement.

use nalgebra::{DMatrix, Matrix3, SMatrix, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::acoustic::{cauchy_acoustic, cosserat_acoustic};
use crate::error::{ensure_finite, Error, Result};
use crate::linalg::{check_unit, levi_civita, normalized, sym2_eigen, tangent_frame, to_array, Mat3, Vec3};
use crate::tensor::{CauchyTensor, CosseratTensor};

pub type CMat3 = Matrix3<Complex64>;
pub type CVec3 = Vector3<Complex64>;
pub type FullMatrix = SMatrix<Complex64, 6, 9>;
pub type ReducedMatrix = SMatrix<Complex64, 5, 5>;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_REL_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn complex(m: &Mat3) -> CMat3 {
    m.map(|x| Complex64::new(x, 0.0))
}

fn rows<const R: usize, const C: usize>(m: &SMatrix<Complex64, R, C>) -> Vec<Vec<Complex64>> {
    (0..R).map(|i| (0..C).map(|j| m[(i, j)]).collect()).collect()
}

fn check_inputs(n: &Vec3, kappa: &Vec3) -> Result<()> {
    check_unit(n)?;
    ensure_finite("surface wavevector", kappa.iter().copied())?;
    let dot = n.dot(kappa);
    if dot.abs() > 1e-12 * kappa.norm().max(1.0) {
        return Err(Error::NonTangentialWavevector { dot });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceOperators {
    pub h1: CMat3,
    pub h1_tilde: CMat3,
    pub h2: CMat3,
}

/// `H1`, `H1~` and `H2` for the mode `kappa` (tangential to `n`).
pub fn surface_operators(b: &CosseratTensor, n: &Vec3, kappa: &Vec3) -> Result<SurfaceOperators> {
    check_inputs(n, kappa)?;
    Ok(surface_operators_unchecked(b, n, kappa))
}

fn surface_operators_unchecked(b: &CosseratTensor, n: &Vec3, kappa: &Vec3) -> SurfaceOperators {
    let bt = b.components();
    // bn[t][s][k] = n_r B_rkts ; bnn[t][s] = n_r n_l B_rlts
    let mut bn = [[[0.0; 3]; 3]; 3];
    let mut bnn = [[0.0; 3]; 3];
    for t in 0..3 {
        for s in 0..3 {
            for k in 0..3 {
                for r in 0..3 {
                    bn[t][s][k] += n[r] * bt[r][k][t][s];
                }
                bnn[t][s] += n[k] * bn[t][s][k];
            }
        }
    }
    let mut h1 = Mat3::zeros();
    let mut h1t = Mat3::zeros();
    let mut h2 = Mat3::zeros();
    for q in 0..3 {
        for nn in 0..3 {
            let (mut a1, mut a1t, mut a2) = (0.0, 0.0, 0.0);
            for p in 0..3 {
                for k in 0..3 {
                    let epqk = levi_civita(p, q, k) * n[p];
                    if epqk == 0.0 {
                        continue;
                    }
                    for s in 0..3 {
                        for m in 0..3 {
                            let e = epqk * levi_civita(s, m, nn);
                            if e == 0.0 {
                                continue;
                            }
                            for t in 0..3 {
                                let brk = bn[t][s][k];
                                a1 += e * brk * (n[t] * kappa[m] + n[m] * kappa[t]);
                                let mut direct = 0.0;
                                for r in 0..3 {
                                    direct += bt[r][k][t][s] * kappa[r];
                                }
                                a1t += e * n[t] * n[m] * (direct - bnn[t][s] * kappa[k]);
                                let first = bnn[t][s] * (n[t] * kappa[k] * kappa[m] + n[m] * kappa[t] * kappa[k]);
                                let mut second = 0.0;
                                for r in 0..3 {
                                    second += bt[r][k][t][s] * n[t] * kappa[r] * kappa[m]
                                        + bt[r][k][t][s] * n[m] * kappa[t] * kappa[r];
                                }
                                second += brk * kappa[m] * kappa[t];
                                a2 += e * (second - first);
                            }
                        }
                    }
                }
            }
            h1[(q, nn)] = 0.25 * a1;
            h1t[(q, nn)] = 0.25 * a1t;
            h2[(q, nn)] = 0.25 * a2;
        }
    }
    let h1 = complex(&h1) * I;
    SurfaceOperators {
        h1,
        h1_tilde: complex(&h1t) * I + h1,
        h2: complex(&h2),
    }
}

/// Traction-continuity system over `(g1, g2, g3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscontinuitySystem {
    pub n: Vec3,
    pub kappa_t: Vec3,
    pub operators: SurfaceOperators,
    pub a_c: Mat3,
    pub a_b: Mat3,
    pub matrix: FullMatrix,
    pub singular_values: Vec<f64>,
    pub effective_rank: usize,
}

impl DiscontinuitySystem {
    /// Always true: at most five independent equations for nine unknowns.
    pub fn underdetermined(&self) -> bool {
        self.effective_rank < 9
    }

    pub fn report(&self) -> DiscontinuityReport {
        DiscontinuityReport {
            n: to_array(&self.n),
            kappa_t: to_array(&self.kappa_t),
            h1: rows(&self.operators.h1),
            h1_tilde: rows(&self.operators.h1_tilde),
            h2: rows(&self.operators.h2),
            matrix: rows(&self.matrix),
            singular_values: self.singular_values.clone(),
            effective_rank: self.effective_rank,
            underdetermined: self.underdetermined(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscontinuityReport {
    pub n: [f64; 3],
    pub kappa_t: [f64; 3],
    pub h1: Vec<Vec<Complex64>>,
    pub h1_tilde: Vec<Vec<Complex64>>,
    pub h2: Vec<Vec<Complex64>>,
    pub matrix: Vec<Vec<Complex64>>,
    pub singular_values: Vec<f64>,
    pub effective_rank: usize,
    pub underdetermined: bool,
}

fn singular_values<const R: usize, const C: usize>(m: &SMatrix<Complex64, R, C>) -> Vec<f64> {
    let d = DMatrix::from_fn(R, C, |i, j| m[(i, j)]);
    let mut sv: Vec<f64> = d.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn effective_rank(sv: &[f64]) -> usize {
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_REL_TOL * top).count()
}

fn place(m: &mut FullMatrix, row: usize, col: usize, block: &CMat3) {
    m.fixed_view_mut::<3, 3>(row, col).copy_from(block);
}

/// Six traction-continuity equations `[A_C + H2, -H1~, -A_B; H1, A_B, 0]`.
pub fn assemble_full_system(
    c: &CauchyTensor,
    b: &CosseratTensor,
    n: &Vec3,
    kappa_t: &Vec3,
) -> Result<DiscontinuitySystem> {
    check_inputs(n, kappa_t)?;
    let ops = surface_operators_unchecked(b, n, kappa_t);
    let a_c = cauchy_acoustic(c, n);
    let a_b = cosserat_acoustic(b, n);
    let (ac, ab) = (complex(&a_c), complex(&a_b));
    let mut m = FullMatrix::zeros();
    place(&mut m, 0, 0, &(ac + ops.h2));
    place(&mut m, 0, 3, &(-ops.h1_tilde));
    place(&mut m, 0, 6, &(-ab));
    place(&mut m, 3, 0, &ops.h1);
    place(&mut m, 3, 3, &ab);
    let sv = singular_values(&m);
    Ok(DiscontinuitySystem {
        n: *n,
        kappa_t: *kappa_t,
        operators: ops,
        a_c,
        a_b,
        effective_rank: effective_rank(&sv),
        singular_values: sv,
        matrix: m,
    })
}

/// The same six equations evaluated from the displacement-gradient jumps
/// compatible with `(g1, g2, g3)`, without the surface operators.
pub fn maxwell_system(c: &CauchyTensor, b: &CosseratTensor, n: &Vec3, kappa_t: &Vec3) -> Result<FullMatrix> {
    check_inputs(n, kappa_t)?;
    let ct = c.components();
    let bt = b.components();
    let d: [Complex64; 3] = std::array::from_fn(|m| I * kappa_t[m]);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = FullMatrix::zeros();
    for col in 0..9 {
        let mut g = [[zero; 3]; 3];
        g[col / 3][col % 3] = Complex64::new(1.0, 0.0);
        let [g1, g2, g3] = g;
        // j1[a][m] = [[u_a,m]], j2[a][m][t], j3[a][m][t][r]
        let mut j1 = [[zero; 3]; 3];
        let mut j2 = [[[zero; 3]; 3]; 3];
        let mut j3 = [[[[zero; 3]; 3]; 3]; 3];
        for a in 0..3 {
            for m in 0..3 {
                j1[a][m] = g1[a] * n[m];
                for t in 0..3 {
                    j2[a][m][t] = g2[a] * (n[m] * n[t]) + g1[a] * (d[m] * n[t] + d[t] * n[m]);
                    for r in 0..3 {
                        j3[a][m][t][r] = g3[a] * (n[r] * n[t] * n[m])
                            + g2[a] * (d[m] * n[r] * n[t] + d[t] * n[r] * n[m] + d[r] * n[t] * n[m])
                            + g1[a] * (d[r] * d[m] * n[t] + d[m] * d[t] * n[r] + d[t] * d[r] * n[m]);
                    }
                }
            }
        }
        // curvature jumps: kappa_ts = (1/2) e_s m a u_a,mt
        let mut dk = [[[zero; 3]; 3]; 3]; // [[kappa_ts,r]]
        let mut k2 = [[zero; 3]; 3]; // [[kappa_ts]]
        for t in 0..3 {
            for s in 0..3 {
                for m in 0..3 {
                    for a in 0..3 {
                        let e = 0.5 * levi_civita(s, m, a);
                        if e == 0.0 {
                            continue;
                        }
                        k2[t][s] += j2[a][m][t] * e;
                        for r in 0..3 {
                            dk[t][s][r] += j3[a][m][t][r] * e;
                        }
                    }
                }
            }
        }
        // [[m_rk,r]], [[m_(nn),k]], [[m_rk]]
        let mut div_m = [zero; 3];
        let mut grad_mnn = [zero; 3];
        let mut m_jump = [[zero; 3]; 3];
        for r in 0..3 {
            for k in 0..3 {
                for t in 0..3 {
                    for s in 0..3 {
                        let v = bt[r][k][t][s];
                        if v == 0.0 {
                            continue;
                        }
                        div_m[k] += dk[t][s][r] * v;
                        m_jump[r][k] += k2[t][s] * v;
                        for l in 0..3 {
                            grad_mnn[l] += dk[t][s][l] * (v * n[r] * n[k]);
                        }
                    }
                }
            }
        }
        for q in 0..3 {
            let mut force = zero;
            for p in 0..3 {
                for m in 0..3 {
                    for a in 0..3 {
                        force += j1[a][m] * (ct[p][q][m][a] * n[p]);
                    }
                }
            }
            let mut couple = zero;
            for p in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(p, q, k) * n[p];
                    if e == 0.0 {
                        continue;
                    }
                    force -= (div_m[k] - grad_mnn[k]) * (0.5 * e);
                    for r in 0..3 {
                        couple += m_jump[r][k] * (0.5 * e * n[r]);
                    }
                }
            }
            out[(q, col)] = force;
            out[(3 + q, col)] = couple;
        }
    }
    Ok(out)
}

/// `(g.n) n` and the tangential remainder.
pub fn decompose_jump(g: &CVec3, n: &Vec3) -> Result<(CVec3, CVec3)> {
    check_unit(n)?;
    let nc = n.map(|x| Complex64::new(x, 0.0));
    let normal = nc * (g.dot(&nc));
    Ok((normal, g - normal))
}

/// Residuals of `A_B g_perp = 0` and `H1~ g_perp = -A_B (i kappa)(g.n)`,
/// relative to `scale_B (1 + |kappa|) |g|`.
pub fn jump_identity_residuals(b: &CosseratTensor, n: &Vec3, kappa_t: &Vec3, g: &CVec3) -> Result<(f64, f64)> {
    let ops = surface_operators(b, n, kappa_t)?;
    let (perp, _) = decompose_jump(g, n)?;
    let gn = g.dot(&n.map(|x| Complex64::new(x, 0.0)));
    let ab = complex(&cosserat_acoustic(b, n));
    let ik = kappa_t.map(|x| I * x);
    let scale = b.scale().max(f64::MIN_POSITIVE) * (1.0 + kappa_t.norm()) * g.norm().max(f64::MIN_POSITIVE);
    let r1 = (ab * perp).norm() / scale;
    let r2 = (ops.h1_tilde * perp + ab * ik * gn).norm() / scale;
    Ok((r1, r2))
}

/// Square system over `(g1_1, g1_2, g1_3, g2_2, t3)` in the frame
/// `(n, e2, e3)`, where `e2` spans the null direction of `A_B(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem {
    pub n: Vec3,
    pub kappa_t: Vec3,
    pub frame: [Vec3; 3],
    pub lambda2: f64,
    pub lambda3: f64,
    pub matrix: ReducedMatrix,
    pub determinant: Complex64,
    pub singular_values: Vec<f64>,
    /// null-space basis (empty when the system is regular)
    pub null_space: Vec<[Complex64; 5]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedReport {
    pub n: [f64; 3],
    pub kappa_t: [f64; 3],
    pub frame: [[f64; 3]; 3],
    pub lambda2: f64,
    pub lambda3: f64,
    pub matrix: Vec<Vec<Complex64>>,
    pub determinant: Complex64,
    pub singular_values: Vec<f64>,
    pub null_space: Vec<[Complex64; 5]>,
}

impl ReducedSystem {
    pub fn report(&self) -> ReducedReport {
        ReducedReport {
            n: to_array(&self.n),
            kappa_t: to_array(&self.kappa_t),
            frame: self.frame.map(|v| to_array(&v)),
            lambda2: self.lambda2,
            lambda3: self.lambda3,
            matrix: rows(&self.matrix),
            determinant: self.determinant,
            singular_values: self.singular_values.clone(),
            null_space: self.null_space.clone(),
        }
    }
}

/// Determinate system at a normal where `A_B(n)` has a null tangential
/// direction. `tol` bounds `|lambda2| / scale_B`.
pub fn reduced_system_at_loss(
    c: &CauchyTensor,
    b: &CosseratTensor,
    n: &Vec3,
    kappa_t: &Vec3,
    tol: f64,
) -> Result<ReducedSystem> {
    check_inputs(n, kappa_t)?;
    let a_b = cosserat_acoustic(b, n);
    let (t, s) = tangent_frame(n);
    let (values, vectors) = sym2_eigen(t.dot(&(a_b * t)), t.dot(&(a_b * s)), s.dot(&(a_b * s)));
    let null = if values[0].abs() <= values[1].abs() { 0 } else { 1 };
    let (lambda2, lambda3) = (values[null], values[1 - null]);
    let sb = b.scale();
    let margin2 = normalized(lambda2.abs(), sb);
    if !(margin2 <= tol) {
        return Err(Error::EllipticAtNormal {
            lambda2_margin: margin2,
            lambda3_margin: normalized(lambda3.abs(), sb),
        });
    }
    let v = vectors[null];
    let e2 = (t * v[0] + s * v[1]).normalize();
    let e3 = n.cross(&e2);
    let rot = Mat3::from_rows(&[n.transpose(), e2.transpose(), e3.transpose()]);
    let rc = complex(&rot);
    let to_frame = |m: &CMat3| rc * m * rc.transpose();
    let ops = surface_operators_unchecked(b, n, kappa_t);
    let a_c = to_frame(&complex(&cauchy_acoustic(c, n)));
    let h1 = to_frame(&ops.h1);
    let h1t = to_frame(&ops.h1_tilde);
    let h2 = to_frame(&ops.h2);
    let zero = Complex64::new(0.0, 0.0);
    let lam3 = Complex64::new(lambda3, 0.0);
    let mut m = ReducedMatrix::zeros();
    for j in 0..3 {
        m[(0, j)] = a_c[(0, j)];
        m[(1, j)] = a_c[(1, j)] + h2[(1, j)];
        m[(2, j)] = a_c[(2, j)] + h2[(2, j)];
        m[(3, j)] = h1[(1, j)];
        m[(4, j)] = h1[(2, j)];
    }
    m[(1, 3)] = -h1t[(1, 1)];
    m[(2, 3)] = -h1t[(2, 1)];
    m[(2, 4)] = -lam3;
    let sv = singular_values(&m);
    let top = sv[0];
    let null_space = if top == 0.0 {
        (0..5)
            .map(|i| std::array::from_fn(|j| if i == j { Complex64::new(1.0, 0.0) } else { zero }))
            .collect()
    } else {
        let d = DMatrix::from_fn(5, 5, |i, j| m[(i, j)]);
        let svd = d.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        svd.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= RANK_REL_TOL * top)
            .map(|(i, _)| std::array::from_fn(|j| v_t[(i, j)].conj()))
            .collect()
    };
    Ok(ReducedSystem {
        n: *n,
        kappa_t: *kappa_t,
        frame: [*n, e2, e3],
        lambda2,
        lambda3,
        determinant: m.determinant(),
        singular_values: sv,
        null_space,
        matrix: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (CauchyTensor, CosseratTensor, Vec3, Vec3) {
        let c = CauchyTensor::from_reduced(&[
            [3.0, 1.0, 0.5, 0.1, 0.0, 0.2],
            [1.0, 2.0, 0.3, 0.0, 0.2, 0.0],
            [0.5, 0.3, 2.5, 0.0, 0.0, 0.1],
            [0.1, 0.0, 0.0, 3.0, 0.0, 0.0],
            [0.0, 0.2, 0.0, 0.0, 3.5, 0.0],
            [0.2, 0.0, 0.1, 0.0, 0.0, 2.8],
        ])
        .unwrap();
        let mut raw = *CosseratTensor::isotropic(0.8, 0.3).components();
        raw[0][1][2][2] += 0.2;
        raw[2][2][0][1] += 0.2;
        raw[1][2][0][2] -= 0.15;
        raw[0][2][1][2] -= 0.15;
        let (b, _) = CosseratTensor::project(raw).unwrap();
        let n = Vec3::new(0.36, 0.48, 0.8);
        let (t, s) = tangent_frame(&n);
        (c, b, n, t * 0.7 - s * 1.1)
    }

    #[test]
    fn matches_maxwell_oracle() {
        let (c, b, n, k) = sample();
        let sys = assemble_full_system(&c, &b, &n, &k).unwrap();
        let oracle = maxwell_system(&c, &b, &n, &k).unwrap();
        assert!((sys.matrix - oracle).norm() < 1e-12 * oracle.norm());
        assert_eq!(sys.effective_rank, 5);
        assert!(sys.underdetermined());
    }

    #[test]
    fn annihilation_and_homogeneity() {
        let (_, b, n, k) = sample();
        let ops = surface_operators(&b, &n, &k).unwrap();
        let nc = n.map(|x| Complex64::new(x, 0.0));
        for h in [&ops.h1, &ops.h1_tilde, &ops.h2] {
            assert!((h.transpose() * nc).norm() < 1e-13);
        }
        let ops2 = surface_operators(&b, &n, &(k * 2.0)).unwrap();
        assert!((ops2.h1 - ops.h1 * Complex64::new(2.0, 0.0)).norm() < 1e-13);
        assert!((ops2.h2 - ops.h2 * Complex64::new(4.0, 0.0)).norm() < 1e-12);
        let zero = surface_operators(&b, &n, &Vec3::zeros()).unwrap();
        assert_eq!(zero.h1.norm() + zero.h1_tilde.norm() + zero.h2.norm(), 0.0);
        assert!(matches!(
            surface_operators(&b, &n, &(k + n * 0.1)),
            Err(Error::NonTangentialWavevector { .. })
        ));
    }

    #[test]
    fn classical_limit_and_zero_mode() {
        let (c, _, n, k) = sample();
        let sys = assemble_full_system(&c, &CosseratTensor::zero(), &n, &k).unwrap();
        assert_eq!(sys.effective_rank, 3);
        let (c, b, n, k) = sample();
        let sys = assemble_full_system(&c, &b, &n, &Vec3::zeros()).unwrap();
        for j in 0..3 {
            for i in 3..6 {
                assert_eq!(sys.matrix[(i, j)].norm(), 0.0);
            }
        }
        let sys = assemble_full_system(&c, &b, &n, &k).unwrap();
        for j in 0..9 {
            let along_n: Complex64 = (0..3).map(|i| sys.matrix[(3 + i, j)] * n[i]).sum();
            assert!(along_n.norm() < 1e-13);
        }
    }

    #[test]
    fn jump_decomposition() {
        let (_, b, n, k) = sample();
        let nc = n.map(|x| Complex64::new(x, 0.0));
        let (p, t) = decompose_jump(&nc, &n).unwrap();
        assert!((p - nc).norm() < 1e-15 && t.norm() < 1e-15);
        let g = CVec3::new(Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5), Complex64::new(-0.7, 0.2));
        let (r1, r2) = jump_identity_residuals(&b, &n, &k, &g).unwrap();
        assert!(r1 < 1e-13 && r2 < 1e-13, "{r1:e} {r2:e}");
    }

    #[test]
    fn reduced_at_ec_h_boundary() {
        use crate::antiplane::{embed, AntiplaneMaterial};
        let m = AntiplaneMaterial::with_b0(1.0, 1.0, 1.0, 4.0, -2.0, 1.0);
        let (c, b) = embed(&m).unwrap();
        let nx = (1.0f64 / 3.0).sqrt();
        let n = Vec3::new(nx, (1.0 - nx * nx).sqrt(), 0.0);
        let kappa = Vec3::new(-n.y, n.x, 0.0) * 0.8 + Vec3::z() * 0.5;
        let r = reduced_system_at_loss(&c, &b, &n, &kappa, 1e-10).unwrap();
        assert!(r.lambda2.abs() < 1e-14 && r.lambda3 > 0.0);
        assert!((r.frame[1].z.abs() - 1.0).abs() < 1e-12);
        assert_eq!(r.matrix.shape(), (5, 5));
        assert!((r.determinant - r.matrix.determinant()).norm() == 0.0);
        for v in &r.null_space {
            let x = nalgebra::SVector::<Complex64, 5>::from_column_slice(v);
            assert!((r.matrix * x).norm() < 1e-9 * r.singular_values[0]);
        }
    }

    #[test]
    fn reduced_requires_loss() {
        let (c, b, n, k) = sample();
        assert!(matches!(
            reduced_system_at_loss(&c, &b, &n, &k, 1e-10),
            Err(Error::EllipticAtNormal { .. })
        ));
    }
}
