//! Exact-arithmetic checks of hidden-variable models for the delayed-choice
//! experiment.
//!
//! Quantum predictions are computed in `f64`; everything on the
//! hidden-variable side is exact rational arithmetic, so the infeasibility of
//! determinism + independence + objectivity is decided by an exact simplex
//! and backed by a checkable Farkas certificate.

pub mod cli;
pub mod dist;
pub mod error;
pub mod feasibility;
pub mod hv;
pub mod linsys;
pub mod montecarlo;
pub mod oracle;
pub mod quantum;
pub mod scalar;
pub mod selftest;

pub use dist::{BinaryDist, GeneralParams, JointDist, Param};
pub use error::{Error, Result};
pub use scalar::{Rational, Scalar, REAL_TOLERANCE};
