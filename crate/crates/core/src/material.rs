//! Material file schema.
//!
//! ```json
//! {
//!   "name": "isotropic-reference",
//!   "cauchy": { "type": "isotropic", "lambda": 1.0, "mu": 1.0 },
//!   "cosserat": { "type": "isotropic", "eta": 1.0, "eta_prime": 0.0 },
//!   "density": 1.0
//! }
//! ```
//!
//! `cauchy` may instead be `{"type": "matrix", "matrix": [[..6..]; 6]}` (tensor
//! strain convention, order 11, 22, 33, 23, 13, 12). `cosserat` may be
//! `{"type": "orthotropic", "b1111": .., ...}` with the twelve moduli of
//! [`OrthotropicModuli`] or `{"type": "matrix", "matrix": [[..9..]; 9]}` on
//! curvature vectors ordered 11, 12, 13, 21, 22, 23, 31, 32, 33. An antiplane
//! material replaces both blocks with `"antiplane": {"c44", "c55", "b1", "b2",
//! "b3", "b4"}`.

use serde::{Deserialize, Serialize};

use crate::antiplane::{embed, AntiplaneMaterial};
use crate::error::{ensure_finite, Error, Result};
use crate::tensor::{CauchyTensor, CosseratTensor, OrthotropicModuli};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CauchySpec {
    Isotropic { lambda: f64, mu: f64 },
    Matrix { matrix: [[f64; 6]; 6] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CosseratSpec {
    Isotropic { eta: f64, eta_prime: f64 },
    Orthotropic(OrthotropicModuli),
    Matrix { matrix: [[f64; 9]; 9] },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cauchy: Option<CauchySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cosserat: Option<CosseratSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antiplane: Option<AntiplaneMaterial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
}

/// Resolved material.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: Option<String>,
    pub cauchy: CauchyTensor,
    pub cosserat: CosseratTensor,
    pub density: Option<f64>,
    pub antiplane: Option<AntiplaneMaterial>,
    /// isotropic `(lambda, mu, eta, eta')` when both blocks were given that way
    pub isotropic: Option<[f64; 4]>,
    /// largest change made when projecting the Cosserat input
    pub projection_residual: f64,
}

impl Material {
    pub fn density(&self) -> Result<f64> {
        self.density
            .ok_or_else(|| Error::InvalidMaterial("density is required for wave computations".into()))
    }
}

impl MaterialFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidMaterial(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("material serializes")
    }

    pub fn resolve(&self) -> Result<Material> {
        if let Some(rho) = self.density {
            if !rho.is_finite() || rho <= 0.0 {
                return Err(Error::InvalidMaterial(format!("density must be positive and finite, got {rho}")));
            }
        }
        let mut isotropic = None;
        let (cauchy, cosserat, residual) = match (&self.antiplane, &self.cauchy, &self.cosserat) {
            (Some(a), None, None) => {
                let (c, b) = embed(a)?;
                (c, b, 0.0)
            }
            (Some(_), _, _) => {
                return Err(Error::InvalidMaterial(
                    "\"antiplane\" cannot be combined with \"cauchy\" or \"cosserat\"".into(),
                ))
            }
            (None, Some(c), Some(b)) => {
                let cauchy = match c {
                    CauchySpec::Isotropic { lambda, mu } => {
                        ensure_finite("cauchy", [*lambda, *mu])?;
                        CauchyTensor::isotropic(*lambda, *mu)
                    }
                    CauchySpec::Matrix { matrix } => CauchyTensor::from_reduced(matrix)?,
                };
                let (cosserat, residual) = match b {
                    CosseratSpec::Isotropic { eta, eta_prime } => {
                        ensure_finite("cosserat", [*eta, *eta_prime])?;
                        (CosseratTensor::isotropic(*eta, *eta_prime), 0.0)
                    }
                    CosseratSpec::Orthotropic(o) => (CosseratTensor::orthotropic(o)?, 0.0),
                    CosseratSpec::Matrix { matrix } => CosseratTensor::from_reduced(matrix)?,
                };
                if let (CauchySpec::Isotropic { lambda, mu }, CosseratSpec::Isotropic { eta, eta_prime }) = (c, b) {
                    isotropic = Some([*lambda, *mu, *eta, *eta_prime]);
                }
                (cauchy, cosserat, residual)
            }
            (None, None, _) => return Err(Error::InvalidMaterial("missing field \"cauchy\"".into())),
            (None, _, None) => return Err(Error::InvalidMaterial("missing field \"cosserat\"".into())),
        };
        Ok(Material {
            name: self.name.clone(),
            cauchy,
            cosserat,
            density: self.density,
            antiplane: self.antiplane,
            isotropic,
            projection_residual: residual,
        })
    }

    pub fn isotropic(lambda: f64, mu: f64, eta: f64, eta_prime: f64, density: Option<f64>) -> Self {
        Self {
            cauchy: Some(CauchySpec::Isotropic { lambda, mu }),
            cosserat: Some(CosseratSpec::Isotropic { eta, eta_prime }),
            density,
            ..Self::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_isotropic() {
        let m = MaterialFile::from_json(
            r#"{"cauchy": {"type": "isotropic", "lambda": 1, "mu": 2},
                "cosserat": {"type": "isotropic", "eta": 1, "eta_prime": 0.5}, "density": 2}"#,
        )
        .unwrap()
        .resolve()
        .unwrap();
        assert_eq!(m.cauchy, CauchyTensor::isotropic(1.0, 2.0));
        assert_eq!(m.isotropic, Some([1.0, 2.0, 1.0, 0.5]));
        assert_eq!(m.density().unwrap(), 2.0);
    }

    #[test]
    fn rejects_bad_input() {
        let err = MaterialFile::from_json(r#"{"cauchy": {"type": "isotropic", "lambda": 1, "mu": 2, "nu": 3}}"#);
        assert!(matches!(err, Err(Error::InvalidMaterial(msg)) if msg.contains("line 1")));
        assert!(MaterialFile::from_json("{").is_err());
        let missing = MaterialFile::from_json(r#"{"cauchy": {"type": "isotropic", "lambda": 1, "mu": 2}}"#).unwrap();
        assert!(missing.resolve().is_err());
        let mut neg = MaterialFile::isotropic(1.0, 1.0, 1.0, 0.0, Some(-1.0));
        assert!(neg.resolve().is_err());
        neg.density = None;
        assert!(neg.resolve().unwrap().density().is_err());
    }

    #[test]
    fn round_trips() {
        let files = [
            MaterialFile::isotropic(1.0, 0.3, 0.7, 0.1, Some(1.5)),
            MaterialFile {
                name: Some("ap".into()),
                antiplane: Some(AntiplaneMaterial::new(0.0, 1.0, 1.0, 0.0, 0.0, 1.0).unwrap()),
                ..MaterialFile::default()
            },
            MaterialFile {
                cauchy: Some(CauchySpec::Matrix {
                    matrix: CauchyTensor::isotropic(2.0, 0.5).to_reduced(),
                }),
                cosserat: Some(CosseratSpec::Matrix {
                    matrix: CosseratTensor::isotropic(1.0, 0.2).to_reduced(),
                }),
                ..MaterialFile::default()
            },
        ];
        for f in files {
            let back = MaterialFile::from_json(&f.to_json()).unwrap();
            assert_eq!(back, f);
            assert_eq!(back.resolve().unwrap(), f.resolve().unwrap());
        }
    }

    #[test]
    fn orthotropic_block() {
        let text = r#"{"cauchy": {"type": "isotropic", "lambda": 1, "mu": 1},
            "cosserat": {"type": "orthotropic", "b1111": 1, "b1122": 0, "b1212": 1, "b1221": 0.2,
              "b1313": 1, "b1331": 0, "b2121": 1, "b2222": 1, "b2323": 1, "b2332": 0, "b3131": 1, "b3232": 1}}"#;
        let m = MaterialFile::from_json(text).unwrap().resolve().unwrap();
        assert_eq!(m.cosserat.get(0, 1, 1, 0), 0.2);
    }
}
