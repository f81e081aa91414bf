//! `cosserat discontinuity`: traction-continuity systems on a surface.

use anyhow::{anyhow, bail, Result};
use cosserat_core::discontinuity::{assemble_full_system, reduced_system_at_loss, DiscontinuityReport, ReducedReport};
use cosserat_core::material::Material;
use cosserat_core::{Error, Vec3};
use serde::Serialize;

/// Largest `|kappa . n| / |kappa|` accepted before the normal component is
/// projected out.
pub const TANGENCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub material: Option<String>,
    pub full: DiscontinuityReport,
    pub ellipticity_lost: bool,
    pub lambda2_margin: f64,
    pub lambda3_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ReducedReport>,
}

/// Resolves the surface normal: explicit, or the `index`-th discontinuity
/// normal of an antiplane material.
pub fn resolve_normal(material: &Material, normal: Option<[f64; 3]>, index: usize) -> Result<Vec3> {
    if let Some(n) = normal {
        return Ok(Vec3::from(n));
    }
    let ap = material
        .antiplane
        .as_ref()
        .ok_or_else(|| anyhow!("--normal is required for non-antiplane materials"))?;
    let normals = cosserat_core::antiplane::discontinuity_normals(ap)?;
    let n = normals
        .get(index)
        .ok_or_else(|| anyhow!("material has {} discontinuity normal(s); index {index} is out of range", normals.len()))?;
    Ok(Vec3::new(n[0], n[1], 0.0))
}

/// Rejects wavevectors with a normal component above [`TANGENCY_TOL`] and
/// removes the rest.
pub fn tangential(n: &Vec3, kappa: [f64; 3]) -> Result<Vec3> {
    let k = Vec3::from(kappa);
    let dot = k.dot(n);
    if dot.abs() > TANGENCY_TOL * k.norm() {
        bail!(Error::NonTangentialWavevector { dot });
    }
    Ok(k - n * dot)
}

pub fn analyze(material: &Material, n: &Vec3, kappa: [f64; 3], tolerance: f64) -> Result<SurfaceReport> {
    let kappa_t = tangential(n, kappa)?;
    let full = assemble_full_system(&material.cauchy, &material.cosserat, n, &kappa_t)?;
    let (reduced, l2, l3) = match reduced_system_at_loss(&material.cauchy, &material.cosserat, n, &kappa_t, tolerance) {
        Ok(r) => {
            let sb = material.cosserat.scale().max(f64::MIN_POSITIVE);
            let (l2, l3) = (r.lambda2.abs() / sb, r.lambda3.abs() / sb);
            (Some(r.report()), l2, l3)
        }
        Err(Error::EllipticAtNormal {
            lambda2_margin,
            lambda3_margin,
        }) => (None, lambda2_margin, lambda3_margin),
        Err(e) => return Err(e.into()),
    };
    Ok(SurfaceReport {
        material: material.name.clone(),
        full: full.report(),
        ellipticity_lost: reduced.is_some(),
        lambda2_margin: l2,
        lambda3_margin: l3,
        reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn material(name: &str) -> Material {
        presets::find(name).unwrap().material.resolve().unwrap()
    }

    #[test]
    fn ec_h_boundary_has_reduced_system() {
        let m = material("ec-h-boundary");
        let n = resolve_normal(&m, None, 0).unwrap();
        let r = analyze(&m, &n, [0.0, 0.0, 1.0], 1e-10).unwrap();
        assert!(r.ellipticity_lost);
        let red = r.reduced.unwrap();
        assert_eq!(red.matrix.len(), 5);
        assert!(r.full.underdetermined);
    }

    #[test]
    fn elliptic_material_has_none() {
        let m = material("isotropic-reference");
        let n = Vec3::new(0.0, 0.6, 0.8);
        let r = analyze(&m, &n, [1.0, 0.0, 0.0], 1e-10).unwrap();
        assert!(!r.ellipticity_lost && r.reduced.is_none());
        assert!(r.full.underdetermined);
        assert!(r.lambda2_margin > 0.1);
    }

    #[test]
    fn non_tangential_rejected() {
        let n = Vec3::new(0.0, 0.0, 1.0);
        assert!(tangential(&n, [0.0, 0.1, 1.0]).is_err());
        let k = tangential(&n, [1.0, 0.0, 1e-9]).unwrap();
        assert_eq!(k.z, 0.0);
        let m = material("isotropic-reference");
        assert!(resolve_normal(&m, None, 0).is_err());
    }
}
