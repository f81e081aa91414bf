//! Small dense helpers: Levi-Civita symbol, 3x3 symmetric eigen-solves, tangent frames.

use nalgebra::{Matrix2, Matrix3, SymmetricEigen, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Tolerance on `| |n| - 1 |` accepted for a unit direction.
pub const UNIT_TOL: f64 = 1e-12;

/// Permutation symbol with `e_123 = +1` (zero-based indices).
#[inline]
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    if i == j || j == k || i == k {
        return 0.0;
    }
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        _ => -1.0,
    }
}

/// Matrix of `[n]x`, so that `skew(n) * v == n.cross(v)`.
#[inline]
pub fn skew(n: &Vec3) -> Mat3 {
    Mat3::new(0.0, -n[2], n[1], n[2], 0.0, -n[0], -n[1], n[0], 0.0)
}

pub fn check_unit(n: &Vec3) -> Result<()> {
    if !n.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("direction".into()));
    }
    let norm = n.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitDirection { norm });
    }
    Ok(())
}

/// Deterministic orthonormal pair `(t, s)` with `(n, t, s)` right-handed.
///
/// The pivot axis is the one along which `n` has the smallest component.
pub fn tangent_frame(n: &Vec3) -> (Vec3, Vec3) {
    let a = n.abs();
    let j = if a[0] <= a[1] && a[0] <= a[2] {
        0
    } else if a[1] <= a[2] {
        1
    } else {
        2
    };
    let mut e = Vec3::zeros();
    e[j] = 1.0;
    let t = (e - n * n[j]).normalize();
    let s = n.cross(&t);
    (t, s)
}

/// Flip sign so that the first component with magnitude above 1e-12 is positive.
pub fn canonical_sign(v: &Vec3) -> Vec3 {
    for x in v.iter() {
        if x.abs() > 1e-12 {
            return if *x < 0.0 { -v } else { *v };
        }
    }
    *v
}

/// Eigen-decomposition of a symmetric 3x3 matrix, eigenvalues ascending.
#[derive(Debug, Clone, Copy)]
pub struct SymEigen3 {
    pub values: [f64; 3],
    pub vectors: [Vec3; 3],
}

impl SymEigen3 {
    pub fn min(&self) -> (f64, Vec3) {
        (self.values[0], self.vectors[0])
    }
}

/// Symmetric 3x3 eigen-solve with a residual check.
///
/// The input is symmetrized first. Falls back to an unbounded-iteration solve
/// if the first pass misses the residual bound.
pub fn sym3_eigen(m: &Mat3) -> SymEigen3 {
    let m = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(m);
    let scale = m.abs().max();
    let residual = eigen_residual(&m, &eig);
    let eig = if residual > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        SymmetricEigen::try_new(m, f64::EPSILON, 0).unwrap_or(eig)
    } else {
        eig
    };
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = [
        eig.eigenvalues[idx[0]],
        eig.eigenvalues[idx[1]],
        eig.eigenvalues[idx[2]],
    ];
    let vectors = [
        eig.eigenvectors.column(idx[0]).into_owned(),
        eig.eigenvectors.column(idx[1]).into_owned(),
        eig.eigenvectors.column(idx[2]).into_owned(),
    ];
    SymEigen3 { values, vectors }
}

fn eigen_residual(m: &Mat3, eig: &SymmetricEigen<f64, nalgebra::U3>) -> f64 {
    (0..3)
        .map(|i| {
            let v = eig.eigenvectors.column(i);
            (m * v - v * eig.eigenvalues[i]).norm()
        })
        .fold(0.0, f64::max)
}

/// Smallest eigenvalue of a symmetric 3x3 matrix.
#[inline]
pub fn sym3_min_eigenvalue(m: &Mat3) -> f64 {
    sym3_eigen(m).values[0]
}

/// Eigenvalues (ascending) of the symmetric 2x2 matrix `[[a, b], [b, c]]`.
#[inline]
pub fn sym2_eigenvalues(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let r = (0.5 * (a - c)).hypot(b);
    let hi = mean + r;
    let lo = mean - r;
    // recover the small root from the product when it suffers cancellation
    let det = a * c - b * b;
    if hi.abs() >= lo.abs() && hi != 0.0 {
        (det / hi, hi).min_max()
    } else if lo != 0.0 {
        (lo, det / lo).min_max()
    } else {
        (lo, hi)
    }
}

/// Ascending eigenpairs of a symmetric 2x2 matrix.
pub fn sym2_eigen(a: f64, b: f64, c: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let eig = SymmetricEigen::new(Matrix2::new(a, b, b, c));
    let (i0, i1) = if eig.eigenvalues[0] <= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let (l0, l1) = sym2_eigenvalues(a, b, c);
    let v0 = eig.eigenvectors.column(i0);
    let v1 = eig.eigenvectors.column(i1);
    ([l0, l1], [[v0[0], v0[1]], [v1[0], v1[1]]])
}

trait MinMax {
    fn min_max(self) -> (f64, f64);
}

impl MinMax for (f64, f64) {
    fn min_max(self) -> (f64, f64) {
        if self.0 <= self.1 {
            self
        } else {
            (self.1, self.0)
        }
    }
}

/// Largest absolute entry.
#[inline]
pub fn max_abs(m: &Mat3) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `x / scale`, or `0` when the scale vanishes.
#[inline]
pub fn normalized(x: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        x / scale
    } else {
        0.0
    }
}

pub(crate) fn to_array(v: &Vec3) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

pub(crate) fn mat_to_array(m: &Mat3) -> [[f64; 3]; 3] {
    [
        [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
        [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
        [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
    ]
}
