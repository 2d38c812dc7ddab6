//! Numerical verification of gauge symmetry for the first-order massless
//! spin-2 field equations on curved backgrounds.
//!
//! The crate builds gauge-generated multiplets from a covector generator
//! `Λ_α`, evaluates the field-equation residuals by exact nested covariant
//! differentiation of truncated Taylor jets, and compares them against
//! closed-form curvature obstructions. The non-minimal coupling at
//! `A = 1/2` removes every bare-Riemann obstruction, so gauge symmetry
//! survives exactly on Ricci-flat backgrounds.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod field_equations;
pub mod geometry;
pub mod jet;
pub mod measure;
pub mod spin2_fields;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use jet::Jet;
pub use tensor::{Point, TensorJet};
