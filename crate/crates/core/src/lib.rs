pub mod cli;
pub mod dist;
pub mod dynamics;
pub mod error;
pub mod reference;
pub mod spectral;
pub mod sum;

pub use error::{Error, Result};
