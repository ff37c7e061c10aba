//! Exact computations for quiver representations: Euler forms, Hom/Ext,
//! Schofield semi-invariants, orbit semigroups and their saturation.

pub mod checks;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod orbit;
pub mod quiver;
pub mod rep;
pub mod thin;
pub mod transforms;

pub use error::{Error, Result};
