//! Asymptotic densities of d-dimensional isotropic Lévy walks (standard,
//! undershooting and overshooting) and a Monte Carlo simulator to check them.

pub mod calculus;
pub mod cli;
pub mod density;
pub mod error;
pub mod params;
pub mod quadrature;
pub mod selftest;
pub mod simulate;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use params::{make_params, ModelParams, Parity, WalkKind};
