pub mod chebsolve;
pub mod error;
pub mod experiments;
pub mod io;
pub mod poly;
pub mod potential;
pub mod sets;
pub mod widomlab;
pub mod zerolab;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::ComplexPoly;
pub use sets::SetSpec;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
