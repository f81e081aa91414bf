//! `cosserat dispersion`: plane-wave branches against wavenumber.

use std::fmt::Write;

use anyhow::{bail, Result};
use cosserat_core::acoustic::{wave_solve, Polarization};
use cosserat_core::antiplane::sh_dispersion;
use cosserat_core::material::Material;
use cosserat_core::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchFilter {
    All,
    Longitudinal,
    /// transverse branches, or the SH branch of an antiplane material
    Shear,
}

impl std::str::FromStr for BranchFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Self::All),
            "longitudinal" | "p" => Ok(Self::Longitudinal),
            "shear" | "transverse" | "s" | "sh" => Ok(Self::Shear),
            _ => Err(format!("unknown branch '{s}' (all, longitudinal, shear)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionRow {
    pub k: f64,
    /// 1-based, by descending frequency; `sh` rows use 0
    pub branch: usize,
    pub polarization: &'static str,
    pub omega_sq: f64,
    pub phase_velocity: Option<f64>,
}

fn pol_name(p: Polarization) -> &'static str {
    match p {
        Polarization::Longitudinal => "longitudinal",
        Polarization::Transverse => "transverse",
        Polarization::Mixed => "mixed",
    }
}

/// Antiplane materials yield only the SH branch along the in-plane part of
/// `direction`.
pub fn dispersion(material: &Material, direction: [f64; 3], ks: &[f64], filter: BranchFilter) -> Result<Vec<DispersionRow>> {
    let rho = material.density()?;
    let mut rows = Vec::new();
    if let Some(ap) = &material.antiplane {
        if filter == BranchFilter::Longitudinal {
            bail!("antiplane materials carry only the shear (SH) branch");
        }
        let norm = direction[0].hypot(direction[1]);
        if !(norm > 0.0) || direction[2].abs() > 1e-12 {
            bail!("antiplane direction must lie in the x-y plane");
        }
        let n = [direction[0] / norm, direction[1] / norm];
        for &k in ks {
            let d = sh_dispersion(ap, rho, n, k)?;
            rows.push(DispersionRow {
                k,
                branch: 0,
                polarization: "sh",
                omega_sq: k * k * d.v_s_sq,
                phase_velocity: d.v_s,
            });
        }
        return Ok(rows);
    }
    let n = Vec3::from(direction);
    for &k in ks {
        let sol = wave_solve(&material.cauchy, &material.cosserat, rho, &n, k)?;
        for (i, b) in sol.branches.iter().enumerate() {
            let keep = match filter {
                BranchFilter::All => true,
                BranchFilter::Longitudinal => b.polarization == Polarization::Longitudinal,
                BranchFilter::Shear => b.polarization == Polarization::Transverse,
            };
            if keep {
                rows.push(DispersionRow {
                    k,
                    branch: i + 1,
                    polarization: pol_name(b.polarization),
                    omega_sq: b.omega_sq,
                    phase_velocity: b.phase_velocity,
                });
            }
        }
    }
    Ok(rows)
}

/// Fixed columns; numbers use Rust formatting, which never localizes.
pub fn to_csv(rows: &[DispersionRow]) -> String {
    let mut out = String::from("k,branch,polarization,omega_sq,phase_velocity\n");
    for r in rows {
        let branch = if r.polarization == "sh" { "sh".to_string() } else { r.branch.to_string() };
        let v = r.phase_velocity.map_or_else(String::new, |v| v.to_string());
        writeln!(out, "{},{},{},{},{}", r.k, branch, r.polarization, r.omega_sq, v).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn material(name: &str) -> Material {
        presets::find(name).unwrap().material.resolve().unwrap()
    }

    #[test]
    fn isotropic_reference_shear_speeds() {
        let rows = dispersion(&material("isotropic-reference"), [0.0, 0.0, 1.0], &[1.0, 2.0], BranchFilter::Shear).unwrap();
        assert_eq!(rows.len(), 4);
        for r in rows {
            let want = if r.k == 1.0 { 2f64.sqrt() } else { 5f64.sqrt() };
            assert!((r.phase_velocity.unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn purely_cosserat_linear_shear() {
        let rows = dispersion(&material("purely-cosserat"), [1.0, 0.0, 0.0], &[0.5, 1.0, 3.0], BranchFilter::Shear).unwrap();
        for r in rows {
            assert!((r.phase_velocity.unwrap() / r.k - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn k_zero_is_classical() {
        let rows = dispersion(&material("isotropic-reference"), [1.0, 0.0, 0.0], &[0.0], BranchFilter::All).unwrap();
        assert!((rows[0].phase_velocity.unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert!((rows[1].phase_velocity.unwrap() - 1.0).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.omega_sq == 0.0));
    }

    #[test]
    fn antiplane_sh_and_missing_density() {
        let m = material("ec-h-boundary");
        let rows = dispersion(&m, [1.0, 0.0, 0.0], &[0.0, 2.0], BranchFilter::All).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(to_csv(&rows).contains(",sh,sh,"));
        let mut m = m;
        m.density = None;
        assert!(dispersion(&m, [1.0, 0.0, 0.0], &[1.0], BranchFilter::All).is_err());
    }
}
