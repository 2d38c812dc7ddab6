//! Metrics, connection, curvature and the nested covariant-derivative
//! engine over jet-valued tensors.

pub mod catalog;
pub mod checks;
pub mod curvature;
pub mod finite_diff;
pub mod frame;

pub use catalog::{Chart, MetricChart, MetricKind, CATALOG, SIGNATURE};
pub use checks::{
    bianchi_contracted_check, commutator_check, metric_compatibility, ricci_flatness, ricci_identity_check,
    ricci_proportionality, riemann_symmetries, RiemannSymmetry,
};
pub use curvature::{curvature, CurvatureBundle};
pub use finite_diff::FiniteDifferenceChart;
pub use frame::{christoffel, covariant_derivative, LocalFrame};
