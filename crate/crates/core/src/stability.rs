//! Positive definiteness, strong and semi-strong ellipticity, ellipticity and
//! the wave-propagation condition, with margins and witnesses.
//!
//! Margins are normalized by the largest absolute tensor component
//! (`scale_C`, `scale_B`); positive-definiteness margins by the spectral norm.

use serde::{Deserialize, Serialize};

use crate::acoustic::{cauchy_acoustic, cosserat_acoustic_from_rank_one, cosserat_rank_one};
use crate::error::{Error, Result};
use crate::linalg::{mat_to_array, normalized, sym2_eigenvalues, sym3_eigen, tangent_frame, to_array, Mat3, Vec3};
use crate::sphere::{minimize_many, SphereMin, SweepConfig};
use crate::tensor::{check_pd_cauchy, check_pd_cosserat, CauchyTensor, CosseratTensor, PdCheck, DEFAULT_REL_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub sweep: SweepConfig,
    pub tolerance: f64,
    /// margins closer than this to the verdict threshold are flagged
    pub boundary_band: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            sweep: SweepConfig::default(),
            tolerance: DEFAULT_REL_TOL,
            boundary_band: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<[f64; 3]>,
    /// amplitude (`q`) or polarization (`p`) vector
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tensor: Option<[[f64; 3]; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub verdict: bool,
    pub margin: f64,
    pub near_boundary: bool,
    pub witness: Witness,
}

#[derive(Debug, Clone, Copy)]
struct Scales {
    c: f64,
    b: f64,
}

impl Scales {
    fn of(c: &CauchyTensor, b: &CosseratTensor) -> Self {
        Self {
            c: c.scale(),
            b: b.scale(),
        }
    }
}

fn se_c_value(c: &CauchyTensor, s: Scales, n: &Vec3) -> f64 {
    normalized(sym3_eigen(&cauchy_acoustic(c, n)).values[0], s.c)
}

fn se_b_value(b: &CosseratTensor, s: Scales, n: &Vec3) -> f64 {
    normalized(sym3_eigen(&cosserat_rank_one(b, n)).values[0], s.b)
}

/// `tau_nu` and the tangent-plane eigenvalues `lambda2 <= lambda3` of `A_B`.
pub(crate) fn ellipticity_quantities(a_c: &Mat3, a_b: &Mat3, n: &Vec3) -> (f64, f64, f64) {
    let (t, s) = tangent_frame(n);
    let tau = n.dot(&(a_c * n));
    let (btt, bts, bss) = (t.dot(&(a_b * t)), t.dot(&(a_b * s)), s.dot(&(a_b * s)));
    let (l2, l3) = sym2_eigenvalues(btt, bts, bss);
    (tau, l2, l3)
}

fn e_value(c: &CauchyTensor, b: &CosseratTensor, s: Scales, n: &Vec3) -> f64 {
    let a_c = cauchy_acoustic(c, n);
    let a_b = cosserat_acoustic_from_rank_one(n, &cosserat_rank_one(b, n));
    e_from(&a_c, &a_b, s, n)
}

fn e_from(a_c: &Mat3, a_b: &Mat3, s: Scales, n: &Vec3) -> f64 {
    let (tau, l2, l3) = ellipticity_quantities(a_c, a_b, n);
    normalized(tau.abs(), s.c)
        .min(normalized(l2.abs(), s.b))
        .min(normalized(l3.abs(), s.b))
}

/// Value and polarization of the wave-propagation test at `n`.
///
/// If either normalized acoustic tensor has a negative eigenvalue below
/// `-tol`, that eigenvalue is returned. Otherwise the smallest eigenvalue of
/// their sum, which vanishes exactly when the null spaces share a vector.
fn wp_eval(a_c: &Mat3, a_b: &Mat3, s: Scales, tol: f64) -> (f64, Vec3) {
    let hat_c = if s.c > 0.0 { a_c / s.c } else { Mat3::zeros() };
    let hat_b = if s.b > 0.0 { a_b / s.b } else { Mat3::zeros() };
    let ec = sym3_eigen(&hat_c);
    let eb = sym3_eigen(&hat_b);
    let (mc, mb) = (ec.values[0], eb.values[0]);
    if mc.min(mb) < -tol {
        return if mc <= mb { ec.min() } else { eb.min() };
    }
    sym3_eigen(&(hat_c + hat_b)).min()
}

fn wp_value(c: &CauchyTensor, b: &CosseratTensor, s: Scales, tol: f64, n: &Vec3) -> f64 {
    let a_c = cauchy_acoustic(c, n);
    let a_b = cosserat_acoustic_from_rank_one(n, &cosserat_rank_one(b, n));
    wp_eval(&a_c, &a_b, s, tol).0
}

fn result(margin: f64, verdict: bool, edge: f64, cfg: &StabilityConfig, witness: Witness) -> ConditionResult {
    ConditionResult {
        verdict,
        margin,
        near_boundary: (margin - edge).abs() < cfg.boundary_band,
        witness,
    }
}

fn se_c_result(c: &CauchyTensor, s: Scales, m: &SphereMin, cfg: &StabilityConfig) -> ConditionResult {
    let e = sym3_eigen(&cauchy_acoustic(c, &m.n));
    let margin = normalized(e.values[0], s.c);
    result(
        margin,
        margin > cfg.tolerance,
        0.0,
        cfg,
        Witness {
            n: Some(to_array(&m.n)),
            vector: Some(to_array(&e.vectors[0])),
            tensor: None,
        },
    )
}

fn se_b_result(b: &CosseratTensor, s: Scales, m: &SphereMin, cfg: &StabilityConfig) -> ConditionResult {
    let e = sym3_eigen(&cosserat_rank_one(b, &m.n));
    let margin = normalized(e.values[0], s.b);
    result(
        margin,
        margin > cfg.tolerance,
        0.0,
        cfg,
        Witness {
            n: Some(to_array(&m.n)),
            vector: Some(to_array(&e.vectors[0])),
            tensor: Some(mat_to_array(&(m.n * e.vectors[0].transpose()))),
        },
    )
}

fn sse_from(se: &ConditionResult, cfg: &StabilityConfig) -> ConditionResult {
    ConditionResult {
        verdict: se.margin >= -cfg.tolerance,
        margin: se.margin,
        near_boundary: se.margin.abs() < cfg.boundary_band,
        witness: se.witness.clone(),
    }
}

fn e_result(c: &CauchyTensor, b: &CosseratTensor, s: Scales, m: &SphereMin, cfg: &StabilityConfig) -> ConditionResult {
    let margin = e_value(c, b, s, &m.n);
    result(
        margin,
        margin > cfg.tolerance,
        0.0,
        cfg,
        Witness {
            n: Some(to_array(&m.n)),
            ..Witness::default()
        },
    )
}

fn wp_result(c: &CauchyTensor, b: &CosseratTensor, s: Scales, m: &SphereMin, cfg: &StabilityConfig) -> ConditionResult {
    let a_c = cauchy_acoustic(c, &m.n);
    let a_b = cosserat_acoustic_from_rank_one(&m.n, &cosserat_rank_one(b, &m.n));
    let (margin, p) = wp_eval(&a_c, &a_b, s, cfg.tolerance);
    result(
        margin,
        margin > cfg.tolerance,
        0.0,
        cfg,
        Witness {
            n: Some(to_array(&m.n)),
            vector: Some(to_array(&p)),
            tensor: None,
        },
    )
}

/// Strong ellipticity of the classical part: `min_n lambda_min(A_C(n)) > tol`.
pub fn check_se_cauchy(c: &CauchyTensor, cfg: &StabilityConfig) -> ConditionResult {
    let s = Scales { c: c.scale(), b: 0.0 };
    let [m] = minimize_many(|n| [se_c_value(c, s, n)], |_, n| se_c_value(c, s, n), &cfg.sweep);
    se_c_result(c, s, &m, cfg)
}

/// Strong ellipticity of the couple-stress part: the form of `B` on rank-one
/// curvatures `n (x) q`, minimized over both unit vectors. The inner minimum
/// over `q` is the smallest eigenvalue of `G(n)`.
pub fn check_se_cosserat(b: &CosseratTensor, cfg: &StabilityConfig) -> ConditionResult {
    let s = Scales { c: 0.0, b: b.scale() };
    let [m] = minimize_many(|n| [se_b_value(b, s, n)], |_, n| se_b_value(b, s, n), &cfg.sweep);
    se_b_result(b, s, &m, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SseResult {
    pub cauchy: ConditionResult,
    pub cosserat: ConditionResult,
}

pub fn check_sse(c: &CauchyTensor, b: &CosseratTensor, cfg: &StabilityConfig) -> SseResult {
    SseResult {
        cauchy: sse_from(&check_se_cauchy(c, cfg), cfg),
        cosserat: sse_from(&check_se_cosserat(b, cfg), cfg),
    }
}

pub fn check_wp(c: &CauchyTensor, b: &CosseratTensor, cfg: &StabilityConfig) -> ConditionResult {
    let s = Scales::of(c, b);
    let tol = cfg.tolerance;
    let [m] = minimize_many(|n| [wp_value(c, b, s, tol, n)], |_, n| wp_value(c, b, s, tol, n), &cfg.sweep);
    wp_result(c, b, s, &m, cfg)
}

/// `min_n min(|tau_nu|/scale_C, |lambda2|/scale_B, |lambda3|/scale_B) > tol`.
pub fn check_ellipticity(c: &CauchyTensor, b: &CosseratTensor, cfg: &StabilityConfig) -> ConditionResult {
    let s = Scales::of(c, b);
    let [m] = minimize_many(|n| [e_value(c, b, s, n)], |_, n| e_value(c, b, s, n), &cfg.sweep);
    e_result(c, b, s, &m, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    #[serde(rename = "PD_C")]
    pub pd_c: ConditionResult,
    #[serde(rename = "PD_B")]
    pub pd_b: ConditionResult,
    #[serde(rename = "SE_C")]
    pub se_c: ConditionResult,
    #[serde(rename = "SE_B")]
    pub se_b: ConditionResult,
    #[serde(rename = "SSE_C")]
    pub sse_c: ConditionResult,
    #[serde(rename = "SSE_B")]
    pub sse_b: ConditionResult,
    #[serde(rename = "E")]
    pub e: ConditionResult,
    #[serde(rename = "WP")]
    pub wp: ConditionResult,
}

pub const CONDITION_NAMES: [&str; 8] = ["PD_C", "PD_B", "SE_C", "SE_B", "SSE_C", "SSE_B", "E", "WP"];

impl StabilityReport {
    pub fn conditions(&self) -> [(&'static str, &ConditionResult); 8] {
        [
            ("PD_C", &self.pd_c),
            ("PD_B", &self.pd_b),
            ("SE_C", &self.se_c),
            ("SE_B", &self.se_b),
            ("SSE_C", &self.sse_c),
            ("SSE_B", &self.sse_b),
            ("E", &self.e),
            ("WP", &self.wp),
        ]
    }

    pub fn get(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions()
            .into_iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v)
    }

    pub fn pd(&self) -> bool {
        self.pd_c.verdict && self.pd_b.verdict
    }

    pub fn se(&self) -> bool {
        self.se_c.verdict && self.se_b.verdict
    }

    pub fn sse(&self) -> bool {
        self.sse_c.verdict && self.sse_b.verdict
    }

    /// Implications that fail although their premise is clear of the
    /// boundary band.
    pub fn hierarchy_violations(&self) -> Vec<&'static str> {
        let clear = |r: &ConditionResult| r.verdict && !r.near_boundary;
        let both = |a: &ConditionResult, b: &ConditionResult| clear(a) && clear(b);
        let mut out = Vec::new();
        if clear(&self.pd_c) && !self.se_c.verdict {
            out.push("PD_C => SE_C");
        }
        if clear(&self.pd_b) && !self.se_b.verdict {
            out.push("PD_B => SE_B");
        }
        if clear(&self.se_c) && !self.sse_c.verdict {
            out.push("SE_C => SSE_C");
        }
        if clear(&self.se_b) && !self.sse_b.verdict {
            out.push("SE_B => SSE_B");
        }
        if both(&self.se_c, &self.se_b) && !self.e.verdict {
            out.push("SE => E");
        }
        if both(&self.se_c, &self.se_b) && !self.wp.verdict {
            out.push("SE => WP");
        }
        out
    }
}

fn pd_result(pd: &PdCheck, cfg: &StabilityConfig) -> ConditionResult {
    result(
        pd.margin,
        pd.margin > cfg.tolerance,
        0.0,
        cfg,
        Witness {
            tensor: Some(pd.witness),
            ..Witness::default()
        },
    )
}

/// Runs every condition on one shared lattice and checks the implications.
pub fn full_report(c: &CauchyTensor, b: &CosseratTensor, cfg: &StabilityConfig) -> Result<StabilityReport> {
    let s = Scales::of(c, b);
    let tol = cfg.tolerance;
    let joint = |n: &Vec3| {
        let a_c = cauchy_acoustic(c, n);
        let g = cosserat_rank_one(b, n);
        let a_b = cosserat_acoustic_from_rank_one(n, &g);
        [
            normalized(sym3_eigen(&a_c).values[0], s.c),
            normalized(sym3_eigen(&g).values[0], s.b),
            e_from(&a_c, &a_b, s, n),
            wp_eval(&a_c, &a_b, s, tol).0,
        ]
    };
    let single = |j: usize, n: &Vec3| match j {
        0 => se_c_value(c, s, n),
        1 => se_b_value(b, s, n),
        2 => e_value(c, b, s, n),
        _ => wp_value(c, b, s, tol, n),
    };
    let [m_sec, m_seb, m_e, m_wp] = minimize_many(joint, single, &cfg.sweep);
    let se_c = se_c_result(c, s, &m_sec, cfg);
    let se_b = se_b_result(b, s, &m_seb, cfg);
    let report = StabilityReport {
        pd_c: pd_result(&check_pd_cauchy(c, tol), cfg),
        pd_b: pd_result(&check_pd_cosserat(b, tol), cfg),
        sse_c: sse_from(&se_c, cfg),
        sse_b: sse_from(&se_b, cfg),
        se_c,
        se_b,
        e: e_result(c, b, s, &m_e, cfg),
        wp: wp_result(c, b, s, &m_wp, cfg),
    };
    let violations = report.hierarchy_violations();
    if !violations.is_empty() {
        return Err(Error::Consistency(format!(
            "implication(s) violated at shared tolerance: {}",
            violations.join(", ")
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> StabilityConfig {
        StabilityConfig {
            sweep: SweepConfig::with_density(512),
            ..StabilityConfig::default()
        }
    }

    fn iso(l: f64, m: f64, eta: f64, etap: f64) -> (CauchyTensor, CosseratTensor) {
        (CauchyTensor::isotropic(l, m), CosseratTensor::isotropic(eta, etap))
    }

    #[test]
    fn se_cauchy_examples() {
        let r = check_se_cauchy(&CauchyTensor::isotropic(1.0, 1.0), &cfg());
        assert!(r.verdict);
        assert!((r.margin - 1.0 / 3.0).abs() < 1e-14);
        assert!(!check_se_cauchy(&CauchyTensor::isotropic(-3.0, 1.0), &cfg()).verdict);
        let edge = check_se_cauchy(&CauchyTensor::isotropic(2.0, 0.0), &cfg());
        assert!(!edge.verdict && edge.near_boundary);
    }

    #[test]
    fn se_cosserat_examples() {
        assert!(check_se_cosserat(&CosseratTensor::isotropic(1.0, 0.0), &cfg()).verdict);
        assert!(!check_se_cosserat(&CosseratTensor::isotropic(1.0, -1.5), &cfg()).verdict);
    }

    #[test]
    fn wp_examples() {
        let (c, b) = iso(1.0, 0.0, 1.0, 0.0);
        assert!(check_wp(&c, &b, &cfg()).verdict);
        let (c, b) = iso(2.0, -0.1, 1.0, 0.0);
        assert!(!check_wp(&c, &b, &cfg()).verdict);
        let (c, b) = iso(1.0, 1.0, 0.0, 0.0);
        assert!(check_wp(&c, &b, &cfg()).verdict);
    }

    #[test]
    fn ellipticity_examples() {
        let (c, b) = iso(1.0, 1.0, 0.0, 0.0);
        assert!(!check_ellipticity(&c, &b, &cfg()).verdict);
        let (c, b) = iso(1.0, -0.25, 1.0, 0.0);
        assert!(check_ellipticity(&c, &b, &cfg()).verdict);
        assert!(!check_wp(&c, &b, &cfg()).verdict);
        // lambda + 2 mu = 0: tau_nu vanishes in every direction
        let (c, b) = iso(1.0, -0.5, 1.0, 0.0);
        let e = check_ellipticity(&c, &b, &cfg());
        assert!(!e.verdict && e.margin.abs() < 1e-15);
        let (c, b) = iso(1.0, 1.0, 1.0, 0.0);
        assert!(check_ellipticity(&c, &b, &cfg()).verdict);
    }

    #[test]
    fn sse_examples() {
        let (c, b) = iso(1.0, 0.0, 1.0, 0.0);
        let sse = check_sse(&c, &b, &cfg());
        assert!(sse.cauchy.verdict);
        assert!(!check_se_cauchy(&c, &cfg()).verdict);
        let (c, b) = iso(1.0, -0.1, 1.0, 0.0);
        assert!(!check_sse(&c, &b, &cfg()).cauchy.verdict);
    }

    #[test]
    fn full_report_presets() {
        let (c, b) = iso(1.0, 1.0, 1.0, 0.0);
        let r = full_report(&c, &b, &cfg()).unwrap();
        assert!(r.conditions().iter().all(|(_, v)| v.verdict));

        let r = full_report(&CauchyTensor::zero(), &CosseratTensor::isotropic(1.0, 0.0), &cfg()).unwrap();
        assert!(!r.pd_c.verdict && !r.se_c.verdict && !r.e.verdict && !r.wp.verdict);

        let (c, b) = iso(1.0, 0.0, 1.0, 0.0);
        let r = full_report(&c, &b, &cfg()).unwrap();
        assert!(!r.pd() && r.e.verdict && r.wp.verdict);
    }

    #[test]
    fn witnesses_reproduce_margins() {
        let c = CauchyTensor::from_reduced(&[
            [3.0, 1.2, 0.4, 0.1, 0.0, 0.2],
            [1.2, 2.5, 0.7, 0.0, 0.3, 0.0],
            [0.4, 0.7, 2.0, 0.2, 0.0, 0.1],
            [0.1, 0.0, 0.2, 3.0, 0.4, 0.0],
            [0.0, 0.3, 0.0, 0.4, 2.6, 0.2],
            [0.2, 0.0, 0.1, 0.0, 0.2, 3.4],
        ])
        .unwrap();
        let b = CosseratTensor::isotropic(1.0, 0.4);
        let r = full_report(&c, &b, &cfg()).unwrap();
        let n = Vec3::from(r.se_c.witness.n.unwrap());
        let q = Vec3::from(r.se_c.witness.vector.unwrap());
        let form = q.dot(&(cauchy_acoustic(&c, &n) * q)) / c.scale();
        assert!((form - r.se_c.margin).abs() < 1e-8);
        let t = r.se_b.witness.tensor.unwrap();
        let x = Mat3::from_fn(|i, j| t[i][j]);
        assert!((b.quadratic_form(&x) / b.scale() - r.se_b.margin).abs() < 1e-8);
    }
}
