//! Exact characteristic numbers of rational curves in the projective plane
//! and on the quadric surface, computed from generating functions.

pub mod cusp;
pub mod enriched;
pub mod error;
pub mod flex;
pub mod hurwitz;
pub mod serial;
pub mod series;
pub mod tangency;
pub mod targets;
pub mod verify;
pub mod workbench;

pub use error::{Error, Result};
pub use series::{
    CurveClass, ExpDir, ExponentTuple, PolyVar, Potential, PotentialKind, Rational, Target,
};
