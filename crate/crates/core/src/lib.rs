pub mod cli;
pub mod complex;
pub mod constructions;
pub mod document;
pub mod equivariant;
pub mod error;
pub mod linalg;
mod serde_util;
pub mod torsion;
pub mod verify;

pub use error::{Error, Result};
pub use torsion::TorsionValue;
