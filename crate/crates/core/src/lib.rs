//! Satellite-communications engineering toolkit.
//!
//! Orbit geometry, RF link budgets, Shannon capacity with MODCOD selection,
//! multi-beam throughput, phased-array figures, mega-constellation footprint
//! statistics and a consistency pipeline for published NTN scenarios.

pub mod antenna;
pub mod capacity;
pub mod constellation;
pub mod error;
pub mod geometry;
pub mod linkbudget;
pub mod quantities;
pub mod scenario;

pub use error::{Error, Result};
pub use quantities::PhysicalConstants;
