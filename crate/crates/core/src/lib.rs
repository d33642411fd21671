//! Verification engine for unitary and overlap uncertainty relations.
//!
//! The crate evaluates the Gram-matrix uncertainty relation for any number of
//! unitaries, its Bargmann-invariant and Robertson–Schrödinger forms, the
//! three- and four-state overlap relations, and the out-of-time-order
//! correlator bounds. The [`interferometer`] module simulates the two-arm
//! photon-counting experiment that measures the same quantities from
//! fringes, so every relation can also be reconstructed from synthetic data.

pub mod error;
pub mod interferometer;
pub mod otoc;
pub mod overlap;
pub mod qlinalg;
pub mod report;
pub mod uur;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use qlinalg::{BlochVector, ComplexMatrix, DensityMatrix, PureState, UnitaryOp};
pub use report::{RelationReport, Sense};
