//! Command-line front end for couple-stress stability analysis.
//!
//! Exit codes: 0 when the command succeeds and every requested condition
//! holds, 1 when a condition fails (or `--reduced` finds an elliptic
//! normal), 2 on input errors.

pub mod check;
pub mod dispersion;
pub mod io;
pub mod presets;
pub mod surface;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cosserat_core::stability::StabilityConfig;
use serde::Serialize;

use crate::check::CheckOptions;
use crate::dispersion::BranchFilter;
use crate::io::Source;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cosserat", version, about = "Stability analysis of constrained Cosserat (couple-stress) solids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct MaterialArgs {
    /// material JSON file
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    pub material: Option<PathBuf>,
    /// built-in material instead of a file
    #[arg(long)]
    pub preset: Option<String>,
}

impl MaterialArgs {
    fn source(&self) -> Source {
        match (&self.preset, &self.material) {
            (Some(p), _) => Source::Preset(p.clone()),
            (None, Some(path)) => Source::File(path.clone()),
            (None, None) => unreachable!("clap requires one of them"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the PD / SE / SSE / E / WP conditions.
    Check {
        #[command(flatten)]
        material: MaterialArgs,
        /// lattice points on the direction hemisphere
        #[arg(long, default_value_t = 4096)]
        sweep_density: usize,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// print the JSON report instead of a table
        #[arg(long)]
        json: bool,
        /// write the JSON report to this file
        #[arg(long)]
        out: Option<PathBuf>,
        /// restrict the exit code to these conditions
        #[arg(long = "condition", value_name = "NAME")]
        conditions: Vec<String>,
        /// also run the three symbol-determinant routes
        #[arg(long)]
        verbose_symbols: bool,
    },
    /// Regime map of the antiplane (beta, gamma) plane as CSV and SVG.
    Sweep {
        #[arg(long, allow_hyphen_values = true, default_value = "-1,4")]
        beta: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-3,3")]
        gamma: String,
        /// `N` or `NxM` nodes
        #[arg(long, default_value = "201")]
        resolution: String,
        /// output prefix; `.csv` and `.svg` are appended
        #[arg(long, default_value = "regime-map")]
        out: PathBuf,
        /// print a JSON summary
        #[arg(long)]
        json: bool,
    },
    /// Plane-wave frequencies and phase velocities over wavenumbers.
    Dispersion {
        #[command(flatten)]
        material: MaterialArgs,
        /// propagation direction (normalized)
        #[arg(long, allow_hyphen_values = true, default_value = "1,0,0")]
        direction: String,
        /// `k1,k2,...` or `lo:hi:count`
        #[arg(long, default_value = "0:2:21")]
        k: String,
        #[arg(long, default_value = "all")]
        branch: BranchFilter,
        /// CSV destination (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Traction-continuity system on a discontinuity surface.
    Discontinuity {
        #[command(flatten)]
        material: MaterialArgs,
        /// surface normal (normalized); antiplane materials default to
        /// their discontinuity normals
        #[arg(long, allow_hyphen_values = true)]
        normal: Option<String>,
        /// which discontinuity normal to use when --normal is absent
        #[arg(long, default_value_t = 0)]
        normal_index: usize,
        /// tangential surface wavevector
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        /// fail (exit 1) unless ellipticity is lost at the normal
        #[arg(long)]
        reduced: bool,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// JSON destination (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List or export the built-in materials.
    Presets {
        #[arg(long)]
        json: bool,
        /// preset to write as a material file
        #[arg(long, value_name = "NAME")]
        export: Option<String>,
        /// destination for --export (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Caps the global thread pool from `COSSERAT_THREADS`.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("COSSERAT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("COSSERAT_THREADS must be a positive integer, got '{v}'"))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_atomic(path, text.as_bytes()),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn check_config(tolerance: f64, density: usize) -> Result<StabilityConfig> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        bail!("--tolerance must be positive");
    }
    if density == 0 {
        bail!("--sweep-density must be positive");
    }
    let mut config = CheckOptions::default().with_density(density).config;
    config.tolerance = tolerance;
    Ok(config)
}

#[derive(Serialize)]
struct PresetListing<'a> {
    name: &'a str,
    description: &'a str,
    material: &'a cosserat_core::material::MaterialFile,
    expected: std::collections::BTreeMap<&'a str, bool>,
}

fn list_presets(as_json: bool) -> String {
    let all = presets::all();
    if as_json {
        let listing: Vec<PresetListing> = all
            .iter()
            .map(|p| PresetListing {
                name: p.name,
                description: p.description,
                material: &p.material,
                expected: p.expected.iter().copied().collect(),
            })
            .collect();
        return json(&listing);
    }
    let mut out = String::new();
    for p in &all {
        out.push_str(&format!("{}\n  {}\n", p.name, p.description));
        let moduli = match (&p.material.antiplane, &p.material.cauchy, &p.material.cosserat) {
            (Some(a), _, _) => format!(
                "antiplane c44={} c55={} b1={} b2={} b3={} b4={} (b0={})",
                a.c44, a.c55, a.b1, a.b2, a.b3, a.b4, a.b0()
            ),
            (None, Some(c), Some(b)) => format!("{} / {}", serde_json::to_string(c).unwrap(), serde_json::to_string(b).unwrap()),
            _ => String::new(),
        };
        out.push_str(&format!("  {moduli}\n  density {}\n  expected:", p.material.density.unwrap_or(f64::NAN)));
        for (k, v) in &p.expected {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
    }
    out
}

/// Runs one command and returns its exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::Check {
            material,
            sweep_density,
            tolerance,
            json: as_json,
            out,
            conditions,
            verbose_symbols,
        } => {
            let opts = CheckOptions {
                config: check_config(tolerance, sweep_density)?,
                symbols: verbose_symbols,
                conditions,
            };
            let (_, m) = io::load(&material.source())?;
            let report = check::check(&m, &opts)?;
            let text = json(&report);
            if let Some(path) = &out {
                io::write_atomic(path, text.as_bytes())?;
            }
            if as_json {
                emit(None, &text)?;
            } else {
                emit(None, &check::render_table(&report))?;
            }
            Ok(if report.all_hold { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Sweep {
            beta,
            gamma,
            resolution,
            out,
            json: as_json,
        } => {
            let beta = io::parse_interval(&beta).context("--beta")?;
            let gamma = io::parse_interval(&gamma).context("--gamma")?;
            let resolution = io::parse_resolution(&resolution).context("--resolution")?;
            let map = sweep::sweep(beta, gamma, resolution)?;
            let with_ext = |ext: &str| {
                let mut s = out.clone().into_os_string();
                s.push(format!(".{ext}"));
                PathBuf::from(s)
            };
            let (csv, svg) = (with_ext("csv"), with_ext("svg"));
            io::write_atomic(&csv, sweep::to_csv(&map).as_bytes())?;
            io::write_atomic(&svg, sweep::to_svg(&map).as_bytes())?;
            if as_json {
                emit(
                    None,
                    &json(&serde_json::json!({
                        "csv": csv,
                        "svg": svg,
                        "components": map.components,
                        "ei_p": map.ei_p,
                        "ec_h": map.ec_h,
                    })),
                )?;
            } else {
                emit(
                    None,
                    &format!("{} regions; wrote {} and {}\n", map.components.len(), csv.display(), svg.display()),
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Dispersion {
            material,
            direction,
            k,
            branch,
            out,
        } => {
            let (_, m) = io::load(&material.source())?;
            let direction = io::parse_direction(&direction).context("--direction")?;
            let ks = io::parse_wavenumbers(&k).context("--k")?;
            let rows = dispersion::dispersion(&m, direction, &ks, branch)?;
            emit(out.as_deref(), &dispersion::to_csv(&rows))?;
            Ok(EXIT_OK)
        }
        Command::Discontinuity {
            material,
            normal,
            normal_index,
            kappa,
            reduced,
            tolerance,
            out,
        } => {
            let (_, m) = io::load(&material.source())?;
            let normal = normal.as_deref().map(io::parse_direction).transpose().context("--normal")?;
            let n = surface::resolve_normal(&m, normal, normal_index)?;
            let kappa = io::parse_vector(&kappa).context("--kappa")?;
            let report = surface::analyze(&m, &n, kappa, tolerance)?;
            emit(out.as_deref(), &json(&report))?;
            if reduced && !report.ellipticity_lost {
                eprintln!(
                    "ellipticity holds at this normal: normalized lambda2 = {:e} exceeds the tolerance {tolerance:e}",
                    report.lambda2_margin
                );
                return Ok(EXIT_FAIL);
            }
            Ok(EXIT_OK)
        }
        Command::Presets { json: as_json, export, out } => {
            match export {
                Some(name) => {
                    let p = presets::find(&name)
                        .with_context(|| format!("unknown preset '{name}' (known: {})", presets::names().join(", ")))?;
                    let mut text = p.material.to_json();
                    text.push('\n');
                    emit(out.as_deref(), &text)?;
                }
                None => emit(out.as_deref(), &list_presets(as_json))?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}
