//! Material loading, argument parsing helpers and atomic output.

use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use cosserat_core::material::{Material, MaterialFile};

use crate::presets;

/// Where a material comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(std::path::PathBuf),
    Preset(String),
}

pub fn load_file(source: &Source) -> Result<MaterialFile> {
    match source {
        Source::Preset(name) => presets::find(name)
            .map(|p| p.material)
            .ok_or_else(|| anyhow!("unknown preset '{name}' (known: {})", presets::names().join(", "))),
        Source::File(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            MaterialFile::from_json(&text).with_context(|| format!("in {}", path.display()))
        }
    }
}

pub fn load(source: &Source) -> Result<(MaterialFile, Material)> {
    let file = load_file(source)?;
    let material = file.resolve()?;
    Ok((file, material))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn parse_number(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| anyhow!("'{s}' is not a number"))?;
    if !v.is_finite() {
        bail!("'{s}' is not finite");
    }
    Ok(v)
}

/// Comma-separated numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_number).collect()
}

/// Two or three components; a 2-vector lies in the x-y plane.
pub fn parse_vector(s: &str) -> Result<[f64; 3]> {
    match parse_list(s)?.as_slice() {
        &[x, y] => Ok([x, y, 0.0]),
        &[x, y, z] => Ok([x, y, z]),
        v => bail!("expected 2 or 3 components, got {}", v.len()),
    }
}

pub fn parse_direction(s: &str) -> Result<[f64; 3]> {
    let v = parse_vector(s)?;
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        bail!("direction '{s}' is zero");
    }
    Ok(v.map(|x| x / norm))
}

/// `lo,hi`
pub fn parse_interval(s: &str) -> Result<(f64, f64)> {
    match parse_list(s)?.as_slice() {
        &[lo, hi] if lo < hi => Ok((lo, hi)),
        &[lo, hi] => bail!("range [{lo}, {hi}] has zero or negative extent"),
        _ => bail!("expected 'lo,hi', got '{s}'"),
    }
}

/// `N` or `NxM`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize)> {
    let parse = |t: &str| -> Result<usize> {
        let n: usize = t.trim().parse().map_err(|_| anyhow!("'{t}' is not a positive integer"))?;
        if n < 2 {
            bail!("resolution must be at least 2, got {n}");
        }
        Ok(n)
    };
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

/// A comma list `1,2,3` or an inclusive linear range `lo:hi:count`.
pub fn parse_wavenumbers(s: &str) -> Result<Vec<f64>> {
    let ks = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            bail!("expected 'lo:hi:count', got '{s}'");
        };
        let (lo, hi) = (parse_number(lo)?, parse_number(hi)?);
        let count: usize = count.trim().parse().map_err(|_| anyhow!("'{count}' is not a count"))?;
        match count {
            0 => bail!("count must be positive"),
            1 => vec![lo],
            _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
        }
    } else {
        parse_list(s)?
    };
    if ks.iter().any(|&k| k < 0.0) {
        bail!("wavenumbers must be non-negative");
    }
    Ok(ks)
}
