//! Time-evolving R-tipping threshold, its parity test and signed distance.
//!
//! The threshold is seeded as the stable manifold of the edge state of the
//! future-limit system and evolved backward in time with periodic
//! re-interpolation. For inside/outside tests the open curve is closed along
//! the boundary of the enlarged phase window on the side away from the OFF state.

mod curve;
mod evolve;
mod fatemap;
pub mod geometry;
pub mod spline;

pub use curve::ThresholdCurve;
pub use evolve::{evolve_threshold_backward, seed_basin_boundary, ThresholdConfig, ThresholdHistory};
pub use fatemap::{grid_fate_map, FateMap, Grid};
