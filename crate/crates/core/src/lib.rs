pub mod acoustic;
pub mod antiplane;
pub mod discontinuity;
pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod material;
pub mod sphere;
pub mod stability;
pub mod symbol;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{Mat3, Vec3};
pub use tensor::{CauchyTensor, CosseratTensor, OrthotropicModuli};
