//! `cosserat sweep`: regime maps in the (beta, gamma) plane.

use std::fmt::Write;

use anyhow::{bail, Result};
use cosserat_core::antiplane::{regime_map, Polyline, Regime, RegimeMap};

pub const DEFAULT_BETA: (f64, f64) = (-1.0, 4.0);
pub const DEFAULT_GAMMA: (f64, f64) = (-3.0, 3.0);
pub const DEFAULT_RESOLUTION: (usize, usize) = (201, 201);

const CELL: f64 = 3.0;
const MARGIN: f64 = 40.0;

pub fn sweep(beta: (f64, f64), gamma: (f64, f64), resolution: (usize, usize)) -> Result<RegimeMap> {
    for (name, (lo, hi)) in [("beta", beta), ("gamma", gamma)] {
        if !(lo < hi) {
            bail!("{name} range [{lo}, {hi}] has zero area");
        }
    }
    Ok(regime_map(beta, gamma, resolution)?)
}

pub fn to_csv(map: &RegimeMap) -> String {
    let mut out = String::from("beta,gamma,regime,label\n");
    for (j, &g) in map.gammas.iter().enumerate() {
        for (i, &b) in map.betas.iter().enumerate() {
            writeln!(out, "{b},{g},{},{}", map.regimes[j][i], map.label(i, j)).unwrap();
        }
    }
    out
}

fn color(r: Regime) -> &'static str {
    match r {
        Regime::EI => "#9ecae1",
        Regime::EC => "#c7e9c0",
        Regime::H => "#fdd0a2",
        Regime::P => "#dadaeb",
    }
}

struct Frame {
    nj: usize,
    b0: f64,
    g0: f64,
    db: f64,
    dg: f64,
}

impl Frame {
    fn x(&self, beta: f64) -> f64 {
        MARGIN + ((beta - self.b0) / self.db + 0.5) * CELL
    }

    fn y(&self, gamma: f64) -> f64 {
        MARGIN + (self.nj as f64 - 0.5 - (gamma - self.g0) / self.dg) * CELL
    }
}

fn polyline(out: &mut String, frame: &Frame, line: &Polyline, class: &str, stroke: &str) {
    let pts: Vec<String> = line
        .points
        .iter()
        .map(|p| format!("{:.2},{:.2}", frame.x(p[0]), frame.y(p[1])))
        .collect();
    writeln!(
        out,
        r#"<polyline class="boundary {class}" fill="none" stroke="{stroke}" stroke-width="2" points="{}"/>"#,
        pts.join(" ")
    )
    .unwrap();
}

/// One `rect` per run of equal labels in a row, so the file stays small.
pub fn to_svg(map: &RegimeMap) -> String {
    let (ni, nj) = (map.betas.len(), map.gammas.len());
    let frame = Frame {
        nj,
        b0: map.betas[0],
        g0: map.gammas[0],
        db: map.beta_step(),
        dg: map.gamma_step(),
    };
    let (w, h) = (ni as f64 * CELL + 2.0 * MARGIN, nj as f64 * CELL + 2.0 * MARGIN);
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, "<title>antiplane regime map</title>").unwrap();
    writeln!(out, r#"<g class="regions" shape-rendering="crispEdges">"#).unwrap();
    for j in 0..nj {
        let row = &map.regimes[j];
        let top = MARGIN + (nj - 1 - j) as f64 * CELL;
        let mut start = 0;
        for i in 1..=ni {
            if i == ni || row[i] != row[start] {
                writeln!(
                    out,
                    r#"<rect class="region-{r}" x="{:.2}" y="{top:.2}" width="{:.2}" height="{CELL}" fill="{}"/>"#,
                    MARGIN + start as f64 * CELL,
                    (i - start) as f64 * CELL,
                    color(row[start]),
                    r = row[start]
                )
                .unwrap();
                start = i;
            }
        }
    }
    writeln!(out, "</g>").unwrap();
    polyline(&mut out, &frame, &map.ei_p, "boundary-EI-P", "#d62728");
    polyline(&mut out, &frame, &map.ec_h, "boundary-EC-H", "#1f77b4");
    for r in Regime::ALL {
        let cells: Vec<(usize, usize)> = (0..nj)
            .flat_map(|j| (0..ni).map(move |i| (i, j)))
            .filter(|&(i, j)| map.regimes[j][i] == r)
            .collect();
        if cells.is_empty() {
            continue;
        }
        let n = cells.len() as f64;
        let bi = cells.iter().map(|c| c.0 as f64).sum::<f64>() / n;
        let gj = cells.iter().map(|c| c.1 as f64).sum::<f64>() / n;
        let x = frame.x(frame.b0 + bi * frame.db);
        let y = frame.y(frame.g0 + gj * frame.dg);
        writeln!(out, r#"<text class="region-label" x="{x:.2}" y="{y:.2}" text-anchor="middle">{r}</text>"#).unwrap();
    }
    let (xl, xr) = (frame.x(frame.b0), frame.x(map.betas[ni - 1]));
    let (yb, yt) = (frame.y(frame.g0), frame.y(map.gammas[nj - 1]));
    writeln!(
        out,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle">β = b2/b4 [{}, {}]</text>"#,
        0.5 * (xl + xr),
        h - 10.0,
        frame.b0,
        map.betas[ni - 1]
    )
    .unwrap();
    writeln!(
        out,
        r#"<text class="axis-label" x="12" y="{:.2}" transform="rotate(-90 12 {:.2})" text-anchor="middle">γ = b0/b4 [{}, {}]</text>"#,
        0.5 * (yb + yt),
        0.5 * (yb + yt),
        frame.g0,
        map.gammas[nj - 1]
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
