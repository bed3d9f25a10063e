//! Frobenius splitting data of complete simplicial toric varieties, computed
//! with exact integer and rational arithmetic.

pub mod error;
pub mod exactlin;
pub mod fan;
pub mod frobenius;
pub mod classes;
pub mod mori;
pub mod cli;
pub mod polyhedra;

pub use error::{Error, Result};
