use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_equations::obstruction::{
    nonminimal_contribution, nonminimal_term, obstruction_rank2, obstruction_rank2_nonminimal, obstruction_scalar,
    riemann_term,
};
use crate::field_equations::residual::{residual_rank2_eq, residual_scalar_eq};
use crate::geometry::{curvature, Chart, CurvatureBundle};
use crate::measure::{flat4, max_abs, Deviation, Mat4, Summed};
use crate::spin2_fields::{assemble_gauge_multiplet, GaugeGenerator, Spin2Multiplet};
use crate::tensor::{Point, TensorJet};

/// The non-minimal coupling constant `A`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CouplingConfig {
    pub a: f64,
}

impl CouplingConfig {
    pub const DEFAULT_SWEEP: [f64; 4] = [0.0, 0.25, 0.5, 1.0];
    /// The value that removes every bare-Riemann term.
    pub const CANCELLING: f64 = 0.5;

    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParameter {
                name: "coupling".into(),
                reason: format!("A must be finite, got {a}"),
            });
        }
        Ok(CouplingConfig { a })
    }

    pub fn default_sweep() -> Vec<CouplingConfig> {
        Self::DEFAULT_SWEEP.iter().map(|&a| CouplingConfig { a }).collect()
    }
}

/// A direct residual set against its closed-form counterpart.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionComparison {
    pub rank: usize,
    pub direct: Vec<f64>,
    pub formula: Vec<f64>,
    pub scale: f64,
    pub deviation: Deviation,
}

impl ObstructionComparison {
    fn new(rank: usize, direct: Vec<f64>, formula: Vec<f64>, scale: f64) -> Self {
        let deviation = Deviation::between(&direct, &formula, scale);
        ObstructionComparison {
            rank,
            direct,
            formula,
            scale,
            deviation,
        }
    }

    fn scalar(direct: Summed<f64>, formula: Summed<f64>) -> Self {
        Self::new(
            0,
            vec![direct.value],
            vec![formula.value],
            direct.scale.max(formula.scale),
        )
    }

    fn rank2(direct: &Summed<Mat4>, formula: &Summed<Mat4>) -> Self {
        Self::new(
            2,
            flat4(&direct.value),
            flat4(&formula.value),
            direct.scale.max(formula.scale),
        )
    }

    /// `max |direct| / scale`: how far from zero the residual is.
    pub fn magnitude(&self) -> f64 {
        Deviation::new(max_abs(&self.direct), self.scale).relative()
    }

    /// `max |formula| / scale`.
    pub fn formula_magnitude(&self) -> f64 {
        Deviation::new(max_abs(&self.formula), self.scale).relative()
    }

    fn worst(self, other: ObstructionComparison) -> ObstructionComparison {
        let (mine, theirs) = (self.deviation.relative(), other.deviation.relative());
        if theirs > mine || theirs.is_nan() {
            other
        } else {
            self
        }
    }
}

/// Everything evaluated once per (chart, point, generator): curvature, the
/// generator jet and the gauge multiplet.
#[derive(Clone, Debug)]
pub struct GaugePoint {
    bundle: CurvatureBundle,
    lambda: TensorJet,
    multiplet: Spin2Multiplet,
}

impl GaugePoint {
    pub fn new(chart: &dyn Chart, point: Point, generator: &GaugeGenerator) -> Result<Self> {
        let bundle = curvature(chart, point)?;
        Self::from_parts(bundle, generator.partials(&point, 3))
    }

    pub fn from_parts(bundle: CurvatureBundle, lambda: TensorJet) -> Result<Self> {
        let multiplet = assemble_gauge_multiplet(&lambda, bundle.frame())?;
        Ok(GaugePoint {
            bundle,
            lambda,
            multiplet,
        })
    }

    pub fn bundle(&self) -> &CurvatureBundle {
        &self.bundle
    }

    pub fn lambda(&self) -> &TensorJet {
        &self.lambda
    }

    pub fn multiplet(&self) -> &Spin2Multiplet {
        &self.multiplet
    }

    /// Vector-equation residual against `−⅔∇^α(R_{αβ}Λ^β)`.
    pub fn scalar_chain(&self) -> Result<ObstructionComparison> {
        let direct = residual_scalar_eq(&self.multiplet, self.bundle.frame())?;
        let formula = obstruction_scalar(&self.lambda, &self.bundle)?;
        Ok(ObstructionComparison::scalar(direct, formula))
    }

    /// Minimal (`A = 0`) rank-2 residual against the reduced obstruction.
    pub fn rank2_chain(&self) -> Result<ObstructionComparison> {
        let direct = residual_rank2_eq(&self.multiplet, &self.bundle, 0.0)?;
        let formula = obstruction_rank2(&self.lambda, &self.bundle)?;
        Ok(ObstructionComparison::rank2(&direct, &formula))
    }

    /// Rank-2 residual at coupling `A` against the reduced obstruction less
    /// the gauge contribution of the coupling term. At `A = ½` the result is
    /// also compared with the Ricci-only closed form and the worse of the two
    /// comparisons is returned.
    pub fn nonminimal_chain(&self, coupling: f64) -> Result<ObstructionComparison> {
        let direct = residual_rank2_eq(&self.multiplet, &self.bundle, coupling)?;
        let base = obstruction_rank2(&self.lambda, &self.bundle)?;
        let contribution = nonminimal_contribution(&self.lambda, &self.bundle, coupling)?;
        let mut value = base.value;
        for (row, c) in value.iter_mut().zip(contribution.value) {
            for (v, cv) in row.iter_mut().zip(c) {
                *v -= cv;
            }
        }
        let formula = Summed::new(value, base.scale.max(contribution.scale));
        let cmp = ObstructionComparison::rank2(&direct, &formula);
        if coupling == CouplingConfig::CANCELLING {
            let explicit = obstruction_rank2_nonminimal(&self.lambda, &self.bundle)?;
            Ok(cmp.worst(ObstructionComparison::rank2(&direct, &explicit)))
        } else {
            Ok(cmp)
        }
    }

    /// Non-minimal term evaluated two ways: contracted against the gauge
    /// rank-2 field, and in closed form from `∇Λ`.
    pub fn contribution_routes(&self, coupling: f64) -> Result<ObstructionComparison> {
        let direct = nonminimal_term(&self.multiplet.phi2, &self.bundle, coupling);
        let formula = nonminimal_contribution(&self.lambda, &self.bundle, coupling)?;
        Ok(ObstructionComparison::rank2(&direct, &formula))
    }

    /// Rank-2 residual at coupling `A` against `(1 − 2A)` times the Riemann
    /// term. Only meaningful on Ricci-flat charts.
    pub fn uniqueness(&self, coupling: f64) -> Result<ObstructionComparison> {
        let direct = residual_rank2_eq(&self.multiplet, &self.bundle, coupling)?;
        let riem = riemann_term(&self.lambda, &self.bundle)?;
        let k = 1.0 - 2.0 * coupling;
        let formula = Summed::new(riem.value.map(|row| row.map(|v| k * v)), k.abs() * riem.scale);
        Ok(ObstructionComparison::rank2(&direct, &formula))
    }

    /// Worst structural invariant of the gauge multiplet.
    pub fn structural(&self) -> Result<Deviation> {
        self.multiplet.structural(self.bundle.frame())
    }
}
