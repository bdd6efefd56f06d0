//! Exact exterior calculus over polynomial charts, Nambu-Poisson structures,
//! and the Leibniz algebroid brackets they carry.

pub mod algebroid;
pub mod calculus;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod exterior;
pub mod report;
pub mod ring;

pub use error::{Error, Result};
