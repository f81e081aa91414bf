//! Central-difference application of the antiplane equilibrium operator.
//!
//! Output covers the interior nodes at least two cells from the edge, so no
//! ghost values are needed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AntiplaneMaterial;
use crate::error::{ensure_finite, Error, Result};

const MARGIN: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2 {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    /// coordinates of node `(0, 0)`
    pub origin: [f64; 2],
}

impl Grid2 {
    pub fn new(nx: usize, ny: usize, h: f64, origin: [f64; 2]) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::GridMismatch(format!("spacing must be positive, got {h}")));
        }
        ensure_finite("grid origin", origin)?;
        Ok(Self { nx, ny, h, origin })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.origin[0] + self.h * i as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.origin[1] + self.h * j as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid of the nodes returned by the operators.
    pub fn interior(&self) -> Result<Grid2> {
        if self.nx < 2 * MARGIN + 1 || self.ny < 2 * MARGIN + 1 {
            return Err(Error::GridMismatch(format!(
                "{}x{} grid has no interior for a 5-point stencil",
                self.nx, self.ny
            )));
        }
        Ok(Grid2 {
            nx: self.nx - 2 * MARGIN,
            ny: self.ny - 2 * MARGIN,
            h: self.h,
            origin: [self.x(MARGIN), self.y(MARGIN)],
        })
    }
}

/// Scalar field stored row by row (`values[j * nx + i]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field2 {
    pub grid: Grid2,
    pub values: Vec<f64>,
}

impl Field2 {
    pub fn new(grid: Grid2, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: Grid2, f: F) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                values.push(f(grid.x(i), grid.y(j)));
            }
        }
        Self { grid, values }
    }

    pub fn zeros(grid: Grid2) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Body force `X_z` and body moments `Y_x`, `Y_y` on the grid of `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyLoads {
    pub x_z: Field2,
    pub y_x: Field2,
    pub y_y: Field2,
}

struct Stencil<'a> {
    f: &'a Field2,
    h: f64,
}

impl Stencil<'_> {
    fn at(&self, i: usize, j: usize, di: isize, dj: isize) -> f64 {
        self.f.get((i as isize + di) as usize, (j as isize + dj) as usize)
    }

    fn dx(&self, i: usize, j: usize) -> f64 {
        (self.at(i, j, 1, 0) - self.at(i, j, -1, 0)) / (2.0 * self.h)
    }

    fn dy(&self, i: usize, j: usize) -> f64 {
        (self.at(i, j, 0, 1) - self.at(i, j, 0, -1)) / (2.0 * self.h)
    }

    fn second(&self, i: usize, j: usize, ax: (isize, isize)) -> f64 {
        (self.at(i, j, ax.0, ax.1) - 2.0 * self.at(i, j, 0, 0) + self.at(i, j, -ax.0, -ax.1)) / (self.h * self.h)
    }

    fn fourth(&self, i: usize, j: usize, ax: (isize, isize)) -> f64 {
        let v = |s: isize| self.at(i, j, s * ax.0, s * ax.1);
        (v(2) - 4.0 * v(1) + 6.0 * v(0) - 4.0 * v(-1) + v(-2)) / self.h.powi(4)
    }

    fn dxxyy(&self, i: usize, j: usize) -> f64 {
        let mut acc = 0.0;
        for (dj, wy) in [(-1isize, 1.0), (0, -2.0), (1, 1.0)] {
            for (di, wx) in [(-1isize, 1.0), (0, -2.0), (1, 1.0)] {
                acc += wx * wy * self.at(i, j, di, dj);
            }
        }
        acc / self.h.powi(4)
    }
}

fn interior_map<F: Fn(usize, usize) -> f64 + Sync>(grid: &Grid2, f: F) -> Result<Field2> {
    let out = grid.interior()?;
    let values: Vec<f64> = (0..out.ny)
        .into_par_iter()
        .flat_map_iter(|jj| {
            let f = &f;
            (0..out.nx).map(move |ii| f(ii + MARGIN, jj + MARGIN))
        })
        .collect();
    Field2::new(out, values)
}

fn check_field(w: &Field2) -> Result<()> {
    Grid2::new(w.grid.nx, w.grid.ny, w.grid.h, w.grid.origin)?;
    if w.values.len() != w.grid.len() {
        return Err(Error::GridMismatch("value count does not match grid".into()));
    }
    ensure_finite("field", w.values.iter().copied())
}

/// `b2 w_xxxx + 2 b0 w_xxyy + b4 w_yyyy` on the interior.
pub fn apply_principal(m: &AntiplaneMaterial, w: &Field2) -> Result<Field2> {
    check_field(w)?;
    let s = Stencil { f: w, h: w.grid.h };
    let b0 = m.b0();
    interior_map(&w.grid, |i, j| {
        m.b2 * s.fourth(i, j, (1, 0)) + 2.0 * b0 * s.dxxyy(i, j) + m.b4 * s.fourth(i, j, (0, 1))
    })
}

/// Residual of the equilibrium equation
/// `c55 w_xx + c44 w_yy - (1/4) L_cs w + X_z + (1/2)(dY_y/dx - dY_x/dy)` on the
/// interior.
pub fn apply_operator(m: &AntiplaneMaterial, w: &Field2, loads: Option<&BodyLoads>) -> Result<Field2> {
    check_field(w)?;
    if let Some(l) = loads {
        for (name, f) in [("X_z", &l.x_z), ("Y_x", &l.y_x), ("Y_y", &l.y_y)] {
            check_field(f)?;
            if f.grid != w.grid {
                return Err(Error::GridMismatch(format!("{name} is not on the grid of w")));
            }
        }
    }
    let h = w.grid.h;
    let s = Stencil { f: w, h };
    let b0 = m.b0();
    let loads = loads.map(|l| (&l.x_z, Stencil { f: &l.y_x, h }, Stencil { f: &l.y_y, h }));
    interior_map(&w.grid, |i, j| {
        let principal = m.b2 * s.fourth(i, j, (1, 0)) + 2.0 * b0 * s.dxxyy(i, j) + m.b4 * s.fourth(i, j, (0, 1));
        let classical = m.c55 * s.second(i, j, (1, 0)) + m.c44 * s.second(i, j, (0, 1));
        let body = loads
            .as_ref()
            .map_or(0.0, |(x, yx, yy)| x.get(i, j) + 0.5 * (yy.dx(i, j) - yx.dy(i, j)));
        classical - 0.25 * principal + body
    })
}
