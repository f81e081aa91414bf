//! Symbols of the equilibrium operator and their determinant identities.
//!
//! With `tau = n.A_C n` and `lambda2 <= lambda3` the tangent-plane eigenvalues
//! of `A_B`:
//!
//! * `det A(k, n) = k^6 (c0 + c1 k^2 + c2 k^4)` with `c2 = tau lambda2 lambda3`
//!   (the `k^12` coefficient `det A_B` vanishes identically and is dropped);
//! * `det[k^4 (A_B - a n (x) A_C n)] = -a k^12 tau lambda2 lambda3`;
//! * the mixed-order principal symbol has `det = -i k^13 tau lambda2 lambda3`.

use num_complex::Complex64;
use serde::Serialize;

use crate::acoustic::{cauchy_acoustic, cosserat_acoustic};
use crate::error::{Error, Result};
use crate::linalg::{check_unit, mat_to_array, normalized, tangent_frame, to_array, Mat3, Vec3};
use crate::sphere::minimize_many;
use crate::stability::{check_ellipticity, ellipticity_quantities, StabilityConfig};
use crate::tensor::{CauchyTensor, CosseratTensor};

pub type ComplexMat3 = nalgebra::Matrix3<Complex64>;

fn adjugate(m: &Mat3) -> Mat3 {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
    // adj(M)_ij = cofactor_ji
    Mat3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}

/// `[c0, c1, c2]` of `det(A_C + s A_B) = c0 + c1 s + c2 s^2` (`s = k^2`).
pub fn total_symbol_coefficients(a_c: &Mat3, a_b: &Mat3) -> [f64; 3] {
    [
        a_c.determinant(),
        (adjugate(a_c) * a_b).trace(),
        (a_c * adjugate(a_b)).trace(),
    ]
}

/// `A(k, n)` and its determinant.
pub fn total_symbol(c: &CauchyTensor, b: &CosseratTensor, n: &Vec3, k: f64) -> Result<(Mat3, f64)> {
    check_unit(n)?;
    let a_c = cauchy_acoustic(c, n);
    let a_b = cosserat_acoustic(b, n);
    let k2 = k * k;
    let [c0, c1, c2] = total_symbol_coefficients(&a_c, &a_b);
    let det = k2 * k2 * k2 * (c0 + c1 * k2 + c2 * k2 * k2);
    Ok((a_c * k2 + a_b * (k2 * k2), det))
}

/// `k^4 (A_B - a n (x) A_C n)`.
pub fn modified_symbol(c: &CauchyTensor, b: &CosseratTensor, n: &Vec3, k: f64, a: f64) -> Result<Mat3> {
    if a == 0.0 {
        return Err(Error::ZeroModifier);
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("modifier constant".into()));
    }
    check_unit(n)?;
    let a_c = cauchy_acoustic(c, n);
    let a_b = cosserat_acoustic(b, n);
    let k4 = k.powi(4);
    Ok((a_b - n * (a_c * n).transpose() * a) * k4)
}

pub fn modified_symbol_det(c: &CauchyTensor, b: &CosseratTensor, n: &Vec3, k: f64, a: f64) -> Result<f64> {
    let m = modified_symbol(c, b, n, 1.0, a)?;
    Ok(m.determinant() * k.powi(12))
}

/// Mixed-order principal symbol in the frame `(n, t, s)` and its determinant.
pub fn dn_symbol(c: &CauchyTensor, b: &CosseratTensor, n: &Vec3, k: f64) -> Result<(ComplexMat3, Complex64)> {
    check_unit(n)?;
    let (t, s) = tangent_frame(n);
    Ok(dn_in_frame(&cauchy_acoustic(c, n), &cosserat_acoustic(b, n), n, &t, &s, k))
}

/// Same as [`dn_symbol`] with a caller-supplied tangent pair.
pub fn dn_symbol_in_frame(
    c: &CauchyTensor,
    b: &CosseratTensor,
    n: &Vec3,
    t: &Vec3,
    s: &Vec3,
    k: f64,
) -> Result<(ComplexMat3, Complex64)> {
    check_unit(n)?;
    Ok(dn_in_frame(&cauchy_acoustic(c, n), &cosserat_acoustic(b, n), n, t, s, k))
}

fn dn_in_frame(a_c: &Mat3, a_b: &Mat3, n: &Vec3, t: &Vec3, s: &Vec3, k: f64) -> (ComplexMat3, Complex64) {
    let k2 = k * k;
    let acn = a_c * n;
    let real = Mat3::new(
        n.dot(&acn),
        t.dot(&acn),
        s.dot(&acn),
        0.0,
        -k2 * t.dot(&(a_b * t)),
        -k2 * t.dot(&(a_b * s)),
        0.0,
        -k2 * s.dot(&(a_b * t)),
        -k2 * s.dot(&(a_b * s)),
    );
    let factor = Complex64::new(0.0, k * k2);
    let m = real.map(|x| factor * x);
    let det = factor * factor * factor * real.determinant();
    (m, det)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolEvaluation {
    pub n: [f64; 3],
    pub k: f64,
    pub total: [[f64; 3]; 3],
    pub det_total: f64,
    pub tau_nu: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub modifier: f64,
    pub det_modified: f64,
    pub det_dn: Complex64,
}

pub fn evaluate(c: &CauchyTensor, b: &CosseratTensor, n: &Vec3, k: f64, a: f64) -> Result<SymbolEvaluation> {
    let (total, det_total) = total_symbol(c, b, n, k)?;
    let det_modified = modified_symbol_det(c, b, n, k, a)?;
    let (_, det_dn) = dn_symbol(c, b, n, k)?;
    let (tau, l2, l3) = ellipticity_quantities(&cauchy_acoustic(c, n), &cosserat_acoustic(b, n), n);
    Ok(SymbolEvaluation {
        n: to_array(n),
        k,
        total: mat_to_array(&total),
        det_total,
        tau_nu: tau,
        lambda2: l2,
        lambda3: l3,
        modifier: a,
        det_modified,
        det_dn,
    })
}

/// Normalized magnitudes `|det| / (scale_C scale_B^2)` of the three routes at
/// `n`: total-symbol leading coefficient, modified symbol (`a = 1`, `k = 1`),
/// mixed-order symbol (`k = 1`).
pub fn route_values(c: &CauchyTensor, b: &CosseratTensor, n: &Vec3) -> [f64; 3] {
    let norm = c.scale() * b.scale() * b.scale();
    let a_c = cauchy_acoustic(c, n);
    let a_b = cosserat_acoustic(b, n);
    let total = total_symbol_coefficients(&a_c, &a_b)[2];
    let modified = (a_b - n * (a_c * n).transpose()).determinant();
    let (t, s) = tangent_frame(n);
    let (_, dn) = dn_in_frame(&a_c, &a_b, n, &t, &s, 1.0);
    [
        normalized(total.abs(), norm),
        normalized(modified.abs(), norm),
        normalized(dn.norm(), norm),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteResult {
    pub verdict: bool,
    pub min_value: f64,
    pub witness: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolEllipticity {
    pub verdict: bool,
    pub total: RouteResult,
    pub modified: RouteResult,
    pub douglis_nirenberg: RouteResult,
    /// verdict of the eigenvalue-based check on the same sweep
    pub direct_verdict: bool,
    pub direct_margin: f64,
}

/// Ellipticity decided from the three symbol determinants.
///
/// Each route is declared non-vanishing when its normalized minimum exceeds
/// the tolerance. A route that is clearly zero (below `tol^3`) while the
/// direct check holds outside the boundary band, or clearly non-zero (above the
/// band) while the direct check fails, is a consistency error.
pub fn ellipticity_via_symbols(c: &CauchyTensor, b: &CosseratTensor, cfg: &StabilityConfig) -> Result<SymbolEllipticity> {
    let mins = minimize_many(|n| route_values(c, b, n), |j, n| route_values(c, b, n)[j], &cfg.sweep);
    let direct = check_ellipticity(c, b, cfg);
    let tol = cfg.tolerance;
    let routes: Vec<RouteResult> = mins
        .iter()
        .map(|m| RouteResult {
            verdict: m.value > tol,
            min_value: m.value,
            witness: to_array(&m.n),
        })
        .collect();
    for (name, r) in ["total", "modified", "douglis-nirenberg"].iter().zip(&routes) {
        let clearly_zero = r.min_value < tol * tol * tol;
        let clearly_nonzero = r.min_value > cfg.boundary_band;
        if (direct.verdict && !direct.near_boundary && clearly_zero) || (!direct.verdict && clearly_nonzero) {
            return Err(Error::Consistency(format!(
                "{name} symbol route ({:e}) disagrees with the direct ellipticity check (margin {:e})",
                r.min_value, direct.margin
            )));
        }
    }
    Ok(SymbolEllipticity {
        verdict: routes.iter().all(|r| r.verdict),
        total: routes[0].clone(),
        modified: routes[1].clone(),
        douglis_nirenberg: routes[2].clone(),
        direct_verdict: direct.verdict,
        direct_margin: direct.margin,
    })
}
