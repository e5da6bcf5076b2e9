pub mod bandwidth;
pub mod distributions;
pub mod error;
pub mod experiments;
pub mod helmholtz;
pub mod jet;
pub mod multiplier;
pub mod quadrature;
pub mod specfun;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};
