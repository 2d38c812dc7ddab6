//! The spin-2 multiplet, its gauge-generated form and structural checks.

pub mod flat;
pub mod generator;
pub mod multiplet;

pub use flat::{flat_gauge_multiplet, flat_rank3, ETA};
pub use generator::{GaugeGenerator, GeneratorFamily, Monomial, Polynomial, TrigFactor, TrigKind, MAX_DEGREE};
pub use multiplet::{
    assemble_gauge_multiplet, gauge_rank3, gauge_scalar_and_rank2, gauge_vector, rank3_free_dimensions,
    vector_from_defining_equation, Spin2Multiplet, TOTAL_COMPONENTS,
};
