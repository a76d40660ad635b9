//! Ruled surfaces in Lorentz-Minkowski space and homothetic solitons of the
//! inverse mean curvature flow.

pub mod curve;
pub mod error;
pub mod family;
pub mod flow;
pub mod jet;
pub mod mink;
pub mod quad;
pub mod ruled;
pub mod soliton;

pub use curve::{Curve, Interval, ScalarFn};
pub use error::{Error, Result};
pub use family::FamilySpec;
pub use jet::{Jet, VJet};
pub use mink::{CausalType, LVec3};
pub use ruled::{Orientation, RuledSurface};
pub use soliton::{classify, SolitonKind, SolitonSpec, Tolerances};
