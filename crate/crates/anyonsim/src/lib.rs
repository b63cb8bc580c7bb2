//! Exact simulation of anyonic Mach-Zehnder interferometry, twisted and untwisted,
//! on density matrices of anyons described by a modular tensor category.

pub mod error;
pub mod interferometry;
pub mod ising;
pub mod mtc;
pub mod oracle;
pub mod twisted;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
