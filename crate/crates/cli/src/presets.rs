//! Built-in materials with their expected verdicts.

use cosserat_core::antiplane::AntiplaneMaterial;
use cosserat_core::material::MaterialFile;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub material: MaterialFile,
    /// condition name and expected verdict; antiplane presets use the
    /// closed-form names PD, SE, E, WP
    pub expected: Vec<(&'static str, bool)>,
}

impl Preset {
    pub fn is_antiplane(&self) -> bool {
        self.material.antiplane.is_some()
    }

    pub fn expected(&self, condition: &str) -> Option<bool> {
        self.expected.iter().find(|(k, _)| *k == condition).map(|(_, v)| *v)
    }
}

fn named(name: &str, mut file: MaterialFile) -> MaterialFile {
    file.name = Some(name.to_string());
    file
}

fn antiplane(name: &str, m: AntiplaneMaterial) -> MaterialFile {
    MaterialFile {
        name: Some(name.to_string()),
        antiplane: Some(m),
        density: Some(1.0),
        ..MaterialFile::default()
    }
}

fn verdicts(values: [bool; 8]) -> Vec<(&'static str, bool)> {
    cosserat_core::stability::CONDITION_NAMES.into_iter().zip(values).collect()
}

pub fn all() -> Vec<Preset> {
    vec![
        Preset {
            name: "isotropic-reference",
            description: "isotropic reference solid, every condition holds",
            material: named("isotropic-reference", MaterialFile::isotropic(1.0, 1.0, 1.0, 0.0, Some(1.0))),
            expected: verdicts([true; 8]),
        },
        Preset {
            name: "purely-cosserat",
            description: "null Cauchy stiffness; only couple stresses resist deformation",
            material: named("purely-cosserat", MaterialFile::isotropic(0.0, 0.0, 1.0, 0.0, Some(1.0))),
            expected: verdicts([false, true, false, true, true, true, false, false]),
        },
        Preset {
            name: "shear-defective",
            description: "null shear modulus stabilized by couple stresses",
            material: named("shear-defective", MaterialFile::isotropic(1.0, 0.0, 1.0, 0.0, Some(1.0))),
            expected: verdicts([false, true, false, true, true, true, true, true]),
        },
        Preset {
            name: "negative-shear",
            description: "negative shear modulus: elliptic but without wave propagation",
            material: named("negative-shear", MaterialFile::isotropic(2.0, -0.1, 1.0, 0.0, Some(1.0))),
            expected: verdicts([false, true, false, true, false, true, true, false]),
        },
        Preset {
            name: "wp-not-e",
            description: "antiplane material that propagates waves but is not elliptic",
            material: antiplane("wp-not-e", AntiplaneMaterial::with_b0(0.0, 1.0, 1.0, 0.0, 1.0, 1.0)),
            expected: vec![("PD", false), ("SE", false), ("E", false), ("WP", true)],
        },
        Preset {
            name: "ec-h-boundary",
            description: "antiplane material on the elliptic-complex / hyperbolic boundary",
            material: antiplane("ec-h-boundary", AntiplaneMaterial::with_b0(1.0, 1.0, 1.0, 4.0, -2.0, 1.0)),
            expected: vec![("PD", false), ("SE", false), ("E", false), ("WP", true)],
        },
    ]
}

pub fn names() -> Vec<&'static str> {
    all().into_iter().map(|p| p.name).collect()
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}
