//! Effective cones, base loci and weak-Fano data for the blow-up of ℙ³
//! along up to five general lines, computed in exact arithmetic and
//! cross-checked by a generic cone engine and a finite-field interpolation
//! oracle.

pub mod baselocus;
pub mod cli;
pub mod cone;
pub mod divisor;
pub mod effective;
pub mod error;
pub mod kernel;
pub mod oracle;

pub use error::{Error, Result};
