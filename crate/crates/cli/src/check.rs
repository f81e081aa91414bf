//! `cosserat check`

use anyhow::{bail, Result};
use cosserat_core::antiplane::{antiplane_conditions, AntiplaneConditions, AntiplaneMaterial, RegimeResult};
use cosserat_core::material::Material;
use cosserat_core::sphere::SweepConfig;
use cosserat_core::stability::{full_report, StabilityConfig, StabilityReport, CONDITION_NAMES};
use cosserat_core::symbol::{ellipticity_via_symbols, SymbolEllipticity};
use serde::Serialize;

pub const ANTIPLANE_CONDITIONS: [&str; 4] = ["PD", "SE", "E", "WP"];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub config: StabilityConfig,
    pub symbols: bool,
    /// empty means every condition
    pub conditions: Vec<String>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            config: StabilityConfig::default(),
            symbols: false,
            conditions: Vec::new(),
        }
    }
}

impl CheckOptions {
    pub fn with_density(mut self, density: usize) -> Self {
        self.config.sweep = SweepConfig::with_density(density);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AntiplaneSection {
    pub moduli: AntiplaneMaterial,
    pub classification: RegimeResult,
    pub conditions: AntiplaneConditions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub material: Option<String>,
    pub config: StabilityConfig,
    pub conditions: StabilityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antiplane: Option<AntiplaneSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbols: Option<SymbolEllipticity>,
    pub requested: Vec<String>,
    pub failed: Vec<String>,
    pub all_hold: bool,
}

impl CheckReport {
    /// The requested verdict; antiplane materials answer PD/SE/E/WP from
    /// the closed forms.
    pub fn verdict(&self, name: &str) -> Option<bool> {
        if let Some(ap) = &self.antiplane {
            let c = &ap.conditions;
            match name {
                "PD" => return Some(c.pd.both()),
                "SE" => return Some(c.se.both()),
                "E" => return Some(c.e),
                "WP" => return Some(c.wp),
                _ => {}
            }
        }
        self.conditions.get(name).map(|r| r.verdict)
    }
}

fn default_conditions(antiplane: bool) -> Vec<String> {
    let names: &[&str] = if antiplane { &ANTIPLANE_CONDITIONS } else { &CONDITION_NAMES };
    names.iter().map(|s| s.to_string()).collect()
}

pub fn check(material: &Material, opts: &CheckOptions) -> Result<CheckReport> {
    let conditions = full_report(&material.cauchy, &material.cosserat, &opts.config)?;
    let antiplane = match &material.antiplane {
        Some(m) => Some(AntiplaneSection {
            moduli: *m,
            classification: m.classify()?,
            conditions: antiplane_conditions(m)?,
        }),
        None => None,
    };
    let symbols = if opts.symbols {
        Some(ellipticity_via_symbols(&material.cauchy, &material.cosserat, &opts.config)?)
    } else {
        None
    };
    let requested = if opts.conditions.is_empty() {
        default_conditions(antiplane.is_some())
    } else {
        opts.conditions.clone()
    };
    let mut report = CheckReport {
        material: material.name.clone(),
        config: opts.config,
        conditions,
        antiplane,
        symbols,
        requested: Vec::new(),
        failed: Vec::new(),
        all_hold: true,
    };
    for name in &requested {
        match report.verdict(name) {
            Some(true) => {}
            Some(false) => report.failed.push(name.clone()),
            None => bail!("unknown condition '{name}'"),
        }
    }
    report.requested = requested;
    report.all_hold = report.failed.is_empty();
    Ok(report)
}

fn fmt_witness(n: Option<[f64; 3]>) -> String {
    n.map_or_else(String::new, |n| format!("n = ({:.6}, {:.6}, {:.6})", n[0], n[1], n[2]))
}

pub fn render_table(report: &CheckReport) -> String {
    let mut out = String::new();
    if let Some(name) = &report.material {
        out.push_str(&format!("material: {name}\n"));
    }
    out.push_str(&format!("{:<7}{:<9}{:>14}  {:<6}{}\n", "cond", "verdict", "margin", "band", "witness"));
    for (name, r) in report.conditions.conditions() {
        out.push_str(&format!(
            "{:<7}{:<9}{:>14.6e}  {:<6}{}\n",
            name,
            r.verdict,
            r.margin,
            if r.near_boundary { "near" } else { "" },
            fmt_witness(r.witness.n)
        ));
    }
    if let Some(ap) = &report.antiplane {
        let c = &ap.conditions;
        out.push_str(&format!(
            "antiplane: regime {} (beta = {}, gamma = {}); PD {} SE {} E {} WP {}\n",
            ap.classification.label, ap.classification.beta, ap.classification.gamma, c.pd.both(), c.se.both(), c.e, c.wp
        ));
    }
    if let Some(s) = &report.symbols {
        out.push_str(&format!(
            "symbol routes: total {} modified {} douglis-nirenberg {}\n",
            s.total.verdict, s.modified.verdict, s.douglis_nirenberg.verdict
        ));
    }
    if report.all_hold {
        out.push_str("all requested conditions hold\n");
    } else {
        out.push_str(&format!("failed: {}\n", report.failed.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn fast() -> CheckOptions {
        CheckOptions::default().with_density(256)
    }

    #[test]
    fn presets_reproduce_expected_verdicts() {
        for p in presets::all() {
            let m = p.material.resolve().unwrap();
            let r = check(&m, &fast()).unwrap();
            for (name, want) in &p.expected {
                assert_eq!(r.verdict(name), Some(*want), "{} {}", p.name, name);
            }
            if p.is_antiplane() {
                assert_eq!(r.conditions.e.verdict, p.expected("E").unwrap(), "{}", p.name);
                assert_eq!(r.conditions.wp.verdict, p.expected("WP").unwrap(), "{}", p.name);
            }
        }
    }

    #[test]
    fn requested_subset_and_unknown() {
        let m = presets::find("shear-defective").unwrap().material.resolve().unwrap();
        let opts = CheckOptions {
            conditions: vec!["E".into(), "WP".into()],
            ..fast()
        };
        assert!(check(&m, &opts).unwrap().all_hold);
        let opts = CheckOptions {
            conditions: vec!["XYZ".into()],
            ..fast()
        };
        assert!(check(&m, &opts).is_err());
    }

    #[test]
    fn table_lists_every_condition() {
        let m = presets::find("isotropic-reference").unwrap().material.resolve().unwrap();
        let t = render_table(&check(&m, &fast()).unwrap());
        for name in CONDITION_NAMES {
            assert!(t.contains(name));
        }
        assert!(t.contains("all requested conditions hold"));
    }
}
