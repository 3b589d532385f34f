//! Exact incidence geometry for finite point sets in the real projective
//! plane: ordinary lines, dual arrangements, cubic curves and the
//! combinatorial experiments around them.

pub mod arrangement;
pub mod audits;
pub mod configurations;
pub mod cubic;
pub mod error;
pub mod geometry;
pub mod incidence;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};
