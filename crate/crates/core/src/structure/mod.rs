//! Structure extraction: cubic covers, triangular grids, ratio maps.

pub mod cover;
pub mod grid;
pub mod ratio;

pub use cover::{cover_by_cubics, cover_by_cubics_with, CoverCurve, CoverEntry, CubicCover};
pub use grid::{verify_triangular_grid, verify_triangular_grid_with, GridReport, TriangularGrid};
pub use ratio::{menelaus_check, quotient_set, MenelausReport, RatioMap, RatioValue};
