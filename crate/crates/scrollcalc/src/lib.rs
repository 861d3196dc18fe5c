//! Exact divisor-class calculus on geometrically ruled surfaces over a curve
//! and on the scrolls they map to.
//!
//! The base curve is described abstractly (genus, named points, declared
//! classes, tabulated h⁰ values) and every dimension is answered either
//! exactly or as an interval, with predicates in three-valued logic.

pub mod blowup;
pub mod curve;
pub mod divisor;
pub mod elm;
pub mod error;
pub mod interval;
pub mod linear_system;
pub mod speciality;
pub mod surface;
pub mod tri;

pub use curve::{CurveError, CurveModel, QuantifierDomain};
pub use divisor::{Atom, DivisorClass, Effectivity};
pub use elm::{ElmStep, Position};
pub use error::{Error, Result};
pub use interval::Interval;
pub use surface::{NumClass, PicClass, RuledSurface, SectionId};
pub use tri::TriState;
