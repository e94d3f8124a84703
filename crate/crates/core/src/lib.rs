pub mod atomic;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod lattice;
pub mod scattering;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
