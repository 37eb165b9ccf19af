//! Multi-rate envelope circuit simulation.
//!
//! The crate splits a circuit DAE into a slow envelope axis and a fast
//! periodic axis, integrates the envelope with variable-step BDF and solves
//! the per-step periodic boundary value problems with an adaptive periodic
//! spline Galerkin method. Spline wavelets on non-uniform grids drive knot
//! refinement and coarsening, and the instantaneous carrier frequency can be
//! co-estimated through a bordered Newton solve.

pub mod circuit;
pub mod error;
pub mod spline;
pub mod wavelet;

pub use error::{Error, Result};
