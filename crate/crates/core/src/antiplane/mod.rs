//! Antiplane strain `u = (0, 0, w(x, y))` in an orthotropic couple-stress solid.

mod grid;
mod regime;

pub use grid::{apply_operator, apply_principal, BodyLoads, Field2, Grid2};
pub use regime::{
    classify, companion_roots, discontinuity_normals, match_roots, regime_map, root_pattern_consistent, Boundary,
    BoundaryMargins, Polyline, Regime, RegimeMap, RegimeResult,
};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::tensor::{CauchyTensor, CosseratTensor, OrthotropicModuli, Tensor4};

/// Factor relating the 3D out-of-plane eigenvalue of `A_B` at an in-plane
/// normal to `b2 nx^4 + 2 b0 nx^2 ny^2 + b4 ny^4`.
pub const LAMBDA3_EMBEDDING_FACTOR: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntiplaneMaterial {
    pub c44: f64,
    pub c55: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
}

impl AntiplaneMaterial {
    pub fn new(c44: f64, c55: f64, b1: f64, b2: f64, b3: f64, b4: f64) -> Result<Self> {
        let m = Self { c44, c55, b1, b2, b3, b4 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("antiplane moduli", [self.c44, self.c55, self.b1, self.b2, self.b3, self.b4])
    }

    /// `c44 = c55 = mu`, `b1 = 4(eta + eta')`, `b2 = b4 = 4 eta`, `b3 = 4 eta'`.
    pub fn isotropic(mu: f64, eta: f64, eta_prime: f64) -> Self {
        Self {
            c44: mu,
            c55: mu,
            b1: 4.0 * (eta + eta_prime),
            b2: 4.0 * eta,
            b3: 4.0 * eta_prime,
            b4: 4.0 * eta,
        }
    }

    /// Material with prescribed `b0` (sets `b3 = b1 - b0`).
    pub fn with_b0(c44: f64, c55: f64, b1: f64, b2: f64, b0: f64, b4: f64) -> Self {
        Self {
            c44,
            c55,
            b1,
            b2,
            b3: b1 - b0,
            b4,
        }
    }

    pub fn with_shear(self, c44: f64, c55: f64) -> Self {
        Self { c44, c55, ..self }
    }

    pub fn b0(&self) -> f64 {
        self.b1 - self.b3
    }

    fn require_b4(&self) -> Result<()> {
        if self.b4 > 0.0 {
            Ok(())
        } else {
            Err(Error::NonPositiveB4 { b4: self.b4 })
        }
    }

    pub fn beta(&self) -> Result<f64> {
        self.require_b4()?;
        Ok(self.b2 / self.b4)
    }

    pub fn gamma(&self) -> Result<f64> {
        self.require_b4()?;
        Ok(self.b0() / self.b4)
    }

    pub fn classify(&self) -> Result<RegimeResult> {
        Ok(classify(self.beta()?, self.gamma()?))
    }

    /// `c55 nx^2 + c44 ny^2`.
    pub fn classical_form(&self, n: [f64; 2]) -> f64 {
        self.c55 * n[0] * n[0] + self.c44 * n[1] * n[1]
    }

    /// `b2 nx^4 + 2 b0 nx^2 ny^2 + b4 ny^4`.
    pub fn quartic_form(&self, n: [f64; 2]) -> f64 {
        let (x2, y2) = (n[0] * n[0], n[1] * n[1]);
        self.b2 * x2 * x2 + 2.0 * self.b0() * x2 * y2 + self.b4 * y2 * y2
    }

    fn scale(&self) -> f64 {
        [self.c44, self.c55, self.b1, self.b2, self.b3, self.b4]
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// Couple-stress moduli of an orthotropic `B` aligned with the axes.
///
/// `b1` is the twisting stiffness `B1111 - B1122` seen by `k_yy = -k_xx`;
/// `b2 = B1212`, `b3 = B1221`, `b4 = B2121`. Requires `B1111 = B2222` and the
/// orthotropic sparsity pattern. The shear moduli of the result are zero.
pub fn from_orthotropic(b: &CosseratTensor) -> Result<AntiplaneMaterial> {
    let tol = 1e-10 * b.scale().max(f64::MIN_POSITIVE);
    let t = b.components();
    let mut off_pattern = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let allowed = (i == j && k == l) || (i != j && ((i == k && j == l) || (i == l && j == k)));
                    if !allowed {
                        off_pattern = off_pattern.max(t[i][j][k][l].abs());
                    }
                }
            }
        }
    }
    if off_pattern > tol {
        return Err(Error::AntiplaneAssumption {
            assumption: "orthotropic symmetry in the coordinate axes",
            residual: off_pattern,
        });
    }
    let unequal = (t[0][0][0][0] - t[1][1][1][1]).abs();
    if unequal > tol {
        return Err(Error::AntiplaneAssumption {
            assumption: "B1111 = B2222",
            residual: unequal,
        });
    }
    Ok(AntiplaneMaterial {
        c44: 0.0,
        c55: 0.0,
        b1: t[0][0][0][0] - t[0][0][1][1],
        b2: t[0][1][0][1],
        b3: t[0][1][1][0],
        b4: t[1][0][1][0],
    })
}

/// Full 3D tensors reproducing the antiplane moduli.
///
/// Out-of-plane Cosserat moduli are set to `h = max|b|` and the in-plane
/// classical block to an isotropic one with `mu = g = max(c44, c55)`, so that
/// at in-plane normals `tau_nu` and the in-plane tangent eigenvalue of `A_B`
/// stay positive and ellipticity is governed by the antiplane quartic.
pub fn embed(m: &AntiplaneMaterial) -> Result<(CauchyTensor, CosseratTensor)> {
    m.validate()?;
    let h = [m.b1, m.b2, m.b3, m.b4].iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let h = if h > 0.0 { h } else { 1.0 };
    let g = m.c44.max(m.c55);
    let g = if g > 0.0 { g } else { 1.0 };
    let b = CosseratTensor::orthotropic(&OrthotropicModuli {
        b1111: m.b1,
        b1122: 0.0,
        b2222: m.b1,
        b1212: m.b2,
        b2121: m.b4,
        b1221: m.b3,
        b1313: h,
        b3131: h,
        b2323: h,
        b3232: h,
        b1331: 0.0,
        b2332: 0.0,
    })?;
    let mut c: Tensor4 = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        c[i][i][i][i] = 2.0 * g;
    }
    let mut shear = |i: usize, j: usize, v: f64| {
        c[i][j][i][j] = v;
        c[j][i][j][i] = v;
        c[i][j][j][i] = v;
        c[j][i][i][j] = v;
    };
    shear(0, 1, g);
    shear(0, 2, m.c55);
    shear(1, 2, m.c44);
    Ok((CauchyTensor::from_components(c)?, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitVerdict {
    pub cauchy: bool,
    pub cosserat: bool,
}

impl SplitVerdict {
    pub fn both(&self) -> bool {
        self.cauchy && self.cosserat
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AntiplaneConditions {
    pub pd: SplitVerdict,
    pub se: SplitVerdict,
    pub e: bool,
    pub wp: bool,
}

/// Closed-form PD, SE, E and WP verdicts.
pub fn antiplane_conditions(m: &AntiplaneMaterial) -> Result<AntiplaneConditions> {
    m.validate()?;
    m.require_b4()?;
    let AntiplaneMaterial { c44, c55, b1, b2, b3, b4 } = *m;
    let b0 = m.b0();
    let tol = 1e-12 * m.scale().max(f64::MIN_POSITIVE);
    let shear_pos = c55 > tol && c44 > tol;
    let root = (b2.max(0.0) * b4).sqrt();
    let pd = SplitVerdict {
        cauchy: shear_pos,
        cosserat: b1 > tol && b2 > tol && b4 > tol && b2 * b4 - b3 * b3 > tol * tol,
    };
    let se = SplitVerdict {
        cauchy: shear_pos,
        cosserat: b1 > tol && b2 > tol && b4 > tol && b3.abs() < b1 + root - tol,
    };
    let e = b2 > tol && b0 > -root + tol;
    let quartic_nonneg = b2 >= -tol && b0 >= -root - tol;
    let wp = c55 >= -tol
        && c44 >= -tol
        && quartic_nonneg
        && !common_zero(m, tol);
    Ok(AntiplaneConditions { pd, se, e, wp })
}

/// Whether some in-plane direction annihilates both the classical and the
/// quartic form.
fn common_zero(m: &AntiplaneMaterial, tol: f64) -> bool {
    let classical_zero = |n: [f64; 2]| m.classical_form(n).abs() <= tol;
    if m.c55.abs() <= tol && m.c44.abs() <= tol {
        return !quartic_zeros(m, tol).is_empty();
    }
    quartic_zeros(m, tol).into_iter().any(classical_zero)
}

/// Unit in-plane directions where the quartic form vanishes.
pub(crate) fn quartic_zeros(m: &AntiplaneMaterial, tol: f64) -> Vec<[f64; 2]> {
    regime::tan2_roots(m.b2, m.b0(), m.b4, tol)
        .into_iter()
        .flat_map(regime::normals_for)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShDispersion {
    pub v_s_sq: f64,
    /// `None` when `v_s_sq < 0` (imaginary velocity)
    pub v_s: Option<f64>,
    pub a33: f64,
}

pub fn sh_dispersion(m: &AntiplaneMaterial, rho: f64, n: [f64; 2], k: f64) -> Result<ShDispersion> {
    m.validate()?;
    if !(rho > 0.0) {
        return Err(Error::NonPositiveDensity(rho));
    }
    ensure_finite("wavenumber", [k])?;
    let norm = n[0].hypot(n[1]);
    if (norm - 1.0).abs() > crate::linalg::UNIT_TOL {
        return Err(Error::NonUnitDirection { norm });
    }
    let v_s_sq = (m.classical_form(n) + 0.25 * k * k * m.quartic_form(n)) / rho;
    Ok(ShDispersion {
        v_s_sq,
        v_s: (v_s_sq >= 0.0).then(|| v_s_sq.sqrt()),
        a33: rho * k * k * v_s_sq,
    })
}
