use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("direction is not a unit vector (|n| = {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("second displacement gradient is not symmetric in its derivative indices (residual {residual:e})")]
    AsymmetricSecondGradient { residual: f64 },

    #[error("density must be positive, got {0}")]
    NonPositiveDensity(f64),

    #[error("the modifier constant a must be non-zero")]
    ZeroModifier,

    #[error("surface wavevector is not tangential to the surface (kappa.n = {dot:e})")]
    NonTangentialWavevector { dot: f64 },

    #[error("antiplane reduction assumption violated: {assumption} (residual {residual:e})")]
    AntiplaneAssumption {
        assumption: &'static str,
        residual: f64,
    },

    #[error("unsupported parameterization: b4 = {b4} is not positive; relabel the in-plane axes so that b4 > 0")]
    NonPositiveB4 { b4: f64 },

    #[error("ellipticity is not lost at this normal (normalized lambda2 = {lambda2_margin:e}, lambda3 = {lambda3_margin:e})")]
    EllipticAtNormal {
        lambda2_margin: f64,
        lambda3_margin: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("symmetric eigen-solve did not meet its residual bound ({residual:e})")]
    EigenSolve { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(label: &str, values: impl IntoIterator<Item = f64>) -> Result<()> {
    if values.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(Error::NonFinite(label.to_string()))
    }
}
