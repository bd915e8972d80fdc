//! Exact rational calculus for Alexiewicz-normed spaces on finitely-presented
//! compact subsets of the real line.
//!
//! Everything in this crate computes with arbitrary-precision rationals; there
//! is no floating point anywhere in the core. The central objects are:
//!
//! * [`CompactSet`] — a finite union of disjoint closed rational intervals
//!   (singletons allowed) of positive total measure;
//! * [`PiecewiseLinear`] — continuous piecewise-linear maps with rational
//!   breakpoints, closed under composition and (for increasing maps) inversion;
//! * [`StepFunction`] — the canonical a.e.-representatives of essentially
//!   bounded functions on a compact set, written in the measure coordinate;
//! * [`IsometryDescriptor`] — the sign/lipeomorphism pair classifying
//!   surjective linear isometries between Alexiewicz-normed spaces;
//! * fiber and gap compatibility predicates and the lifted homeomorphism
//!   between compact sets.

pub mod alexiewicz;
pub mod compatibility;
mod error;
pub mod isometry;
pub mod lifting;
pub mod pl;
pub mod projection;
pub mod rational;
pub mod sampling;
pub mod schema;
pub mod set;
pub mod verification;

pub use alexiewicz::{Primitive, StepFunction};
pub use compatibility::{FiberMatching, GapCorrespondence, Incompatibility, IncompatibilityReason};
pub use error::Error;
pub use isometry::IsometryDescriptor;
pub use lifting::{AffineExtension, LiftedMap};
pub use pl::PiecewiseLinear;
pub use projection::{Fiber, FunctionOnSet, ProjectionTable};
pub use rational::Rational;
pub use set::{CompactSet, Gap};

pub type Result<T> = std::result::Result<T, Error>;
