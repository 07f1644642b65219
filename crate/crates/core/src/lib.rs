//! Flag-bridge syndrome extraction for small stabilizer codes.

pub mod circuit;
pub mod code;
pub mod dataset;
pub mod error;
pub mod ft;
pub mod lut;
pub mod mapping;
pub mod mc;
pub mod noise;
pub mod pauli;
pub mod protocol;

pub use error::{Error, Result};
