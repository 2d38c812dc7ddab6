use thiserror::Error;

use crate::tensor::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point:?} is outside the valid region of {chart}: {bound}")]
    Domain { chart: String, point: Point, bound: String },
    #[error("jet depth exhausted: need order {needed}, have {available}")]
    JetDepth { needed: u8, available: u8 },
    #[error("field sits at {field:?} but the geometry was evaluated at {frame:?}")]
    PointMismatch { field: Point, frame: Point },
    #[error("metric of {chart} is degenerate at {point:?}")]
    DegenerateMetric { chart: String, point: Point },
    #[error("unknown metric '{0}' (expected minkowski, schwarzschild, de_sitter or frw)")]
    UnknownMetric(String),
    #[error("invalid parameter '{name}': {reason}")]
    InvalidParameter { name: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn jet_depth(needed: u8, available: u8) -> Self {
        Error::JetDepth { needed, available }
    }
}
