//! Regimes of `Psi^4 + 2 gamma Psi^2 + beta = 0` in the `(beta, gamma)` plane.

use std::collections::VecDeque;
use std::fmt;

use nalgebra::linalg::Schur;
use nalgebra::Matrix4;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// four purely imaginary roots
    EI,
    /// two complex-conjugate pairs
    EC,
    /// four real roots
    H,
    /// two real and two imaginary roots
    P,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::EI, Regime::EC, Regime::H, Regime::P];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::EI => "EI",
            Regime::EC => "EC",
            Regime::H => "H",
            Regime::P => "P",
        }
    }

    pub fn is_elliptic(self) -> bool {
        matches!(self, Regime::EI | Regime::EC)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Boundary {
    #[serde(rename = "EI/P-boundary")]
    EiP,
    #[serde(rename = "EC/H-boundary")]
    EcH,
    #[serde(rename = "EI/EC-boundary")]
    EiEc,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::EiP => "EI/P-boundary",
            Boundary::EcH => "EC/H-boundary",
            Boundary::EiEc => "EI/EC-boundary",
        }
    }

    /// Whether ellipticity is lost on this boundary.
    pub fn loses_ellipticity(self) -> bool {
        !matches!(self, Boundary::EiEc)
    }
}

/// Signed distances to the regime boundaries (`None` where the curve is not
/// defined, i.e. `beta < 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryMargins {
    /// `beta`
    pub ei_p: f64,
    /// `gamma + sqrt(beta)`
    pub ec_h: Option<f64>,
    /// `gamma - sqrt(beta)`
    pub ei_ec: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeResult {
    pub beta: f64,
    pub gamma: f64,
    pub regime: Regime,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    pub label: &'static str,
    pub roots: [Complex64; 4],
    /// unit `(nx, ny)` normals where the principal quartic vanishes
    pub normals: Vec<[f64; 2]>,
    pub margins: BoundaryMargins,
}

fn boundary_tolerance(beta: f64, gamma: f64) -> f64 {
    1e-8 * (1.0 + beta.abs() + gamma.abs())
}

/// Regime by the weak inequalities plus an optional boundary tag.
pub fn regime_of(beta: f64, gamma: f64) -> (Regime, Option<Boundary>) {
    let regime = if beta <= 0.0 {
        Regime::P
    } else {
        let r = beta.sqrt();
        if gamma >= r {
            Regime::EI
        } else if gamma <= -r {
            Regime::H
        } else {
            Regime::EC
        }
    };
    let tol = boundary_tolerance(beta, gamma);
    let root = beta.max(0.0).sqrt();
    let curve_distance = |upper: bool| {
        let vertical = if upper { (gamma - root).abs() } else { (gamma + root).abs() };
        let on_side = if upper { gamma >= 0.0 } else { gamma <= 0.0 };
        if on_side {
            vertical.min((beta - gamma * gamma).abs())
        } else {
            vertical
        }
    };
    let mut candidates = Vec::with_capacity(3);
    if gamma > tol {
        candidates.push((beta.abs(), Boundary::EiP));
    }
    if beta > -tol {
        candidates.push((curve_distance(false), Boundary::EcH));
        candidates.push((curve_distance(true), Boundary::EiEc));
    }
    let boundary = candidates
        .into_iter()
        .filter(|(d, _)| *d < tol)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, b)| b);
    (regime, boundary)
}

/// Closed-form roots for the regime, arranged as in the regime's pattern.
pub fn closed_form_roots(beta: f64, gamma: f64, regime: Regime) -> [Complex64; 4] {
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match regime {
        Regime::EI => {
            let r = beta.sqrt();
            let d = ((gamma - r).max(0.0) * (gamma + r)).sqrt();
            let c1 = (gamma + d).sqrt();
            let c2 = beta.sqrt() / c1;
            [im(c1), im(c2), im(-c1), im(-c2)]
        }
        Regime::EC => {
            let r = beta.sqrt();
            let f = ((r - gamma) / 2.0).max(0.0).sqrt();
            let c = ((r + gamma) / 2.0).max(0.0).sqrt();
            [
                Complex64::new(-f, c),
                Complex64::new(f, c),
                Complex64::new(-f, -c),
                Complex64::new(f, -c),
            ]
        }
        Regime::H => {
            let r = beta.sqrt();
            let d = ((-gamma - r).max(0.0) * (r - gamma)).sqrt();
            let e1 = (-gamma + d).sqrt();
            let e2 = beta.sqrt() / e1;
            [re(e1), re(e2), re(-e1), re(-e2)]
        }
        Regime::P => {
            let d = (gamma * gamma - beta).sqrt();
            let (f2, c2) = if gamma > 0.0 {
                (-beta / (gamma + d), gamma + d)
            } else {
                (d - gamma, -beta / (d - gamma))
            };
            let (f, c) = (f2.max(0.0).sqrt(), c2.max(0.0).sqrt());
            [re(f), im(c), re(-f), im(-c)]
        }
    }
}

fn quartic(z: Complex64, beta: f64, gamma: f64) -> Complex64 {
    let z2 = z * z;
    z2 * z2 + z2 * (2.0 * gamma) + beta
}

/// Francis iteration stalls on companion matrices of some even polynomials
/// (e.g. `x^4 + 1`); a fixed well-conditioned similarity breaks the symmetry.
fn companion_eigenvalues(companion: &Matrix4<f64>) -> nalgebra::Vector4<Complex64> {
    if let Some(s) = Schur::try_new(*companion, f64::EPSILON, 500) {
        return s.complex_eigenvalues();
    }
    #[rustfmt::skip]
    let t = Matrix4::new(
        1.0, 0.3, -0.2, 0.1,
        0.05, 1.0, 0.25, -0.15,
        -0.1, 0.2, 1.0, 0.3,
        0.15, -0.05, 0.1, 1.0,
    );
    let t_inv = t.try_inverse().expect("fixed similarity is invertible");
    let mixed = t_inv * companion * t;
    match Schur::try_new(mixed, f64::EPSILON, 5000) {
        Some(s) => s.complex_eigenvalues(),
        None => Schur::new(mixed).complex_eigenvalues(),
    }
}

/// Roots from the eigenvalues of the companion matrix, Newton-polished.
pub fn companion_roots(beta: f64, gamma: f64) -> [Complex64; 4] {
    #[rustfmt::skip]
    let companion = Matrix4::new(
        0.0, -2.0 * gamma, 0.0, -beta,
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
    );
    let eig = companion_eigenvalues(&companion);
    std::array::from_fn(|i| {
        let mut z = eig[i];
        let mut pz = quartic(z, beta, gamma).norm();
        for _ in 0..8 {
            let dp = z * z * z * 4.0 + z * (4.0 * gamma);
            if dp.norm() == 0.0 || pz == 0.0 {
                break;
            }
            let next = z - quartic(z, beta, gamma) / dp;
            let pn = quartic(next, beta, gamma).norm();
            if !(pn < pz) {
                break;
            }
            z = next;
            pz = pn;
        }
        z
    })
}

/// Largest distance between two root sets under the best pairing.
pub fn match_roots(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if i == j || j == k || i == k {
                    continue;
                }
                let l = 6 - i - j - k;
                let err = [(a[0] - b[i]), (a[1] - b[j]), (a[2] - b[k]), (a[3] - b[l])]
                    .iter()
                    .map(|d| d.norm())
                    .fold(0.0, f64::max);
                best = best.min(err);
            }
        }
    }
    best
}

/// Whether the roots show the regime's symmetry pattern to `tol` (relative to
/// the largest root modulus, at least 1).
pub fn root_pattern_consistent(regime: Regime, roots: &[Complex64; 4], tol: f64) -> bool {
    let s = roots.iter().map(|z| z.norm()).fold(1.0, f64::max) * tol;
    let real = |z: &Complex64| z.im.abs() < s;
    let imag = |z: &Complex64| z.re.abs() < s;
    match regime {
        Regime::EI => roots.iter().all(imag),
        Regime::H => roots.iter().all(real),
        Regime::EC => {
            roots.iter().all(|z| z.re.abs() >= s && z.im.abs() >= s)
                && roots.iter().all(|z| roots.iter().any(|w| (w - z.conj()).norm() < s))
        }
        Regime::P => roots.iter().filter(|z| real(z)).count() == 2 && roots.iter().filter(|z| imag(z)).count() == 2,
    }
}

/// Nonnegative roots `t = tan^2 phi` of `b4 t^2 + 2 b0 t + b2 = 0` (`b4 > 0`).
pub(crate) fn tan2_roots(b2: f64, b0: f64, b4: f64, tol: f64) -> Vec<f64> {
    let mut ts = Vec::new();
    if b2.abs() <= tol {
        ts.push(0.0);
        let other = -2.0 * b0 / b4;
        if other > tol {
            ts.push(other);
        }
        return ts;
    }
    let disc = b0 * b0 - b4 * b2;
    if disc.abs() <= tol * b0.abs().max(b4).max(b2.abs()) {
        let t = -b0 / b4;
        if t > 0.0 {
            ts.push(t);
        }
    } else if disc > 0.0 {
        let q = -(b0 + b0.signum() * disc.sqrt());
        for t in [q / b4, b2 / q] {
            if t > 0.0 {
                ts.push(t);
            }
        }
    }
    ts
}

/// `(nx, ny)` with `ny^2 / nx^2 = t`, all sign combinations.
pub(crate) fn normals_for(t: f64) -> Vec<[f64; 2]> {
    let nx = (1.0 / (1.0 + t)).sqrt();
    let ny = (t / (1.0 + t)).sqrt();
    if ny == 0.0 {
        vec![[1.0, 0.0], [-1.0, 0.0]]
    } else {
        vec![[nx, ny], [nx, -ny], [-nx, ny], [-nx, -ny]]
    }
}

fn normals(beta: f64, gamma: f64, boundary: Option<Boundary>) -> Vec<[f64; 2]> {
    match boundary {
        Some(Boundary::EcH) => return normals_for(beta.max(0.0).sqrt()),
        Some(Boundary::EiP) => return normals_for(0.0),
        _ => {}
    }
    if beta > 0.0 && gamma > -beta.sqrt() {
        return Vec::new();
    }
    tan2_roots(beta, gamma, 1.0, 0.0).into_iter().flat_map(normals_for).collect()
}

/// Regime, roots, discontinuity normals and boundary margins of `(beta, gamma)`.
pub fn classify(beta: f64, gamma: f64) -> RegimeResult {
    let (regime, boundary) = regime_of(beta, gamma);
    let root = (beta >= 0.0).then(|| beta.sqrt());
    RegimeResult {
        beta,
        gamma,
        regime,
        boundary,
        label: boundary.map_or(regime.as_str(), Boundary::as_str),
        roots: closed_form_roots(beta, gamma, regime),
        normals: normals(beta, gamma, boundary),
        margins: BoundaryMargins {
            ei_p: beta,
            ec_h: root.map(|r| gamma + r),
            ei_ec: root.map(|r| gamma - r),
        },
    }
}

/// Normals of discontinuity surfaces: empty strictly inside the elliptic region.
pub fn discontinuity_normals(m: &super::AntiplaneMaterial) -> Result<Vec<[f64; 2]>> {
    Ok(m.classify()?.normals)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Polyline {
    /// `(beta, gamma)` vertices
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionComponent {
    pub regime: Regime,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeMap {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
    /// `regimes[j][i]` at `(betas[i], gammas[j])`
    pub regimes: Vec<Vec<Regime>>,
    pub boundaries: Vec<Vec<Option<Boundary>>>,
    pub components: Vec<RegionComponent>,
    /// `beta = 0`, `gamma > 0`
    pub ei_p: Polyline,
    /// `gamma = -sqrt(beta)`
    pub ec_h: Polyline,
}

impl RegimeMap {
    pub fn label(&self, i: usize, j: usize) -> &'static str {
        self.boundaries[j][i].map_or(self.regimes[j][i].as_str(), Boundary::as_str)
    }

    pub fn beta_step(&self) -> f64 {
        step(&self.betas)
    }

    pub fn gamma_step(&self) -> f64 {
        step(&self.gammas)
    }
}

fn step(v: &[f64]) -> f64 {
    (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64
}

fn axis(range: (f64, f64), n: usize, name: &str) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidRange(format!("{name} range [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(Error::InvalidRange(format!("{name} resolution {n} < 2")));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

/// Regime labels on a node grid with connected regions and the two
/// ellipticity-loss boundaries traced between neighbouring nodes.
pub fn regime_map(beta_range: (f64, f64), gamma_range: (f64, f64), resolution: (usize, usize)) -> Result<RegimeMap> {
    let betas = axis(beta_range, resolution.0, "beta")?;
    let gammas = axis(gamma_range, resolution.1, "gamma")?;
    let rows: Vec<(Vec<Regime>, Vec<Option<Boundary>>)> = gammas
        .par_iter()
        .map(|&g| betas.iter().map(|&b| regime_of(b, g)).unzip())
        .collect();
    let (regimes, boundaries): (Vec<_>, Vec<_>) = rows.into_iter().unzip();

    let mut ei_p = Polyline::default();
    for (j, &g) in gammas.iter().enumerate() {
        if g <= 0.0 {
            continue;
        }
        for i in 1..betas.len() {
            if regimes[j][i - 1] == Regime::P && regimes[j][i] == Regime::EI {
                ei_p.points.push([0.5 * (betas[i - 1] + betas[i]), g]);
            }
        }
    }
    let mut ec_h = Polyline::default();
    for (i, &b) in betas.iter().enumerate() {
        if b <= 0.0 {
            continue;
        }
        for j in 1..gammas.len() {
            if regimes[j - 1][i] == Regime::H && regimes[j][i] == Regime::EC {
                ec_h.points.push([b, 0.5 * (gammas[j - 1] + gammas[j])]);
            }
        }
    }
    let components = connected_components(&regimes);
    Ok(RegimeMap {
        betas,
        gammas,
        regimes,
        boundaries,
        components,
        ei_p,
        ec_h,
    })
}

fn connected_components(grid: &[Vec<Regime>]) -> Vec<RegionComponent> {
    let (nj, ni) = (grid.len(), grid[0].len());
    let mut seen = vec![vec![false; ni]; nj];
    let mut out = Vec::new();
    for j0 in 0..nj {
        for i0 in 0..ni {
            if seen[j0][i0] {
                continue;
            }
            let regime = grid[j0][i0];
            let mut cells = 0;
            let mut queue = VecDeque::from([(j0, i0)]);
            seen[j0][i0] = true;
            while let Some((j, i)) = queue.pop_front() {
                cells += 1;
                let mut visit = |jj: usize, ii: usize| {
                    if !seen[jj][ii] && grid[jj][ii] == regime {
                        seen[jj][ii] = true;
                        queue.push_back((jj, ii));
                    }
                };
                if j > 0 {
                    visit(j - 1, i);
                }
                if j + 1 < nj {
                    visit(j + 1, i);
                }
                if i > 0 {
                    visit(j, i - 1);
                }
                if i + 1 < ni {
                    visit(j, i + 1);
                }
            }
            out.push(RegionComponent { regime, cells });
        }
    }
    out
}
