//! Field-equation residuals and their closed-form curvature obstructions.
//!
//! The direct path differentiates the multiplet with nested covariant
//! derivatives and never touches curvature except in the coupling term. The
//! formula path uses curvature contractions and at most one derivative of
//! `Λ`. Agreement between the two is the check.

pub mod chain;
pub mod flat;
pub mod obstruction;
pub mod residual;

pub use chain::{CouplingConfig, GaugePoint, ObstructionComparison};
pub use flat::{flat_first_order_residuals, flat_second_order_residuals, FlatResiduals};
pub use obstruction::{
    nonminimal_contribution, nonminimal_term, obstruction_rank2, obstruction_rank2_nonminimal, obstruction_scalar,
    riemann_term, symmetrized_riemann,
};
pub use residual::{residual_rank2_eq, residual_rank3_eq, residual_scalar_eq};
