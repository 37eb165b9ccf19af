//! Non-uniform and periodic B-spline spaces: evaluation, knot insertion,
//! splitting points and quadrature.

mod curve;
mod grid;
mod insert;
mod quadrature;

pub use curve::SplineCurve;
pub use grid::{KnotGrid, SplittingPoints};
pub use quadrature::{integrate, QuadRule};

pub(crate) use curve::basis_row;
pub(crate) use insert::{grid_with_knot, insert_window};
pub(crate) use quadrature::knot_breakpoints;
