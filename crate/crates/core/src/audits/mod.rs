//! Combinatorial experiments: restricted sumsets, almost-group recovery,
//! the convexity gap and chord multiplicities of regular polygons.

pub mod chords;
pub mod convexity;
pub mod group;
pub mod sumset;

pub use chords::{ngon_chord_multiplicity, ChordReport, Region};
pub use convexity::{convexity_gap_experiment, ConvexMap, ConvexityStats};
pub use group::{almost_group_recover, AlmostGroup, FiniteAbelianGroup};
pub use sumset::{restricted_sumset, sumset_bound_check, Mode, Op, PairSet, SumsetReport};
