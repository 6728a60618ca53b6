//! Exact computation of Wasserstein degrees of toric statistical models.
//!
//! The crate builds the Wasserstein unit ball of a finite metric, enumerates
//! its face lattice, and counts complex critical points of the per-face linear
//! optimization problem over a toric variety. Polar degrees of the variety,
//! which bound those counts, are available both from closed formulas and by
//! slicing the conormal variety with random linear spaces.

pub mod exact;
pub mod groebner;
pub mod metric;
pub mod polar;
pub mod polytope;
pub mod random;
pub mod toric;
pub mod wdeg;
