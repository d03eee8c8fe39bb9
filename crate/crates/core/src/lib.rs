//! Perturbative normal forms for isochronous (action-angle) Hamiltonians.
//!
//! The crate provides a truncated Poisson-series algebra, Lie-series
//! canonical transformations, Birkhoff and Kolmogorov normal forms, two
//! Lindstedt-type schemes and the numerics used to compare them.

pub mod error;
pub mod series;

pub use error::{Error, Result};
pub mod freq;
pub mod prep;
pub mod lie;
pub mod normalform;
pub mod lindstedt;
pub mod dynamics;
