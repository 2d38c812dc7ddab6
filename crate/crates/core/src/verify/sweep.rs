use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::finite_diff::NOMINAL_ORDER;
use crate::geometry::{curvature, Chart, FiniteDifferenceChart};
use crate::tensor::{Point, TensorJet};
use crate::verify::config::{invalid, ScenarioConfig};
use crate::verify::report::SCHEMA_VERSION;
use crate::verify::run::sample_points;

/// Observed orders must land within this distance of the nominal order.
pub const ORDER_BAND: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStatus {
    /// Every error is exactly zero.
    Exact,
    Converged,
    OrderMismatch,
    NonMonotone,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepQuantity {
    pub name: String,
    /// Max-norm error over all sampled points, one per step.
    pub errors: Vec<f64>,
    /// `ln(e_i / e_{i+1}) / ln(h_i / h_{i+1})`.
    pub orders: Vec<f64>,
    pub status: SweepStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub chart: String,
    pub points: Vec<Point>,
    pub steps: Vec<f64>,
    pub nominal_order: f64,
    pub quantities: Vec<SweepQuantity>,
    pub passed: bool,
}

impl SweepReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep report is always serializable")
    }
}

fn classify(steps: &[f64], errors: &[f64]) -> (Vec<f64>, SweepStatus) {
    if errors.iter().all(|&e| e == 0.0) {
        return (Vec::new(), SweepStatus::Exact);
    }
    let orders: Vec<f64> = errors
        .windows(2)
        .zip(steps.windows(2))
        .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect();
    let status = if errors
        .windows(2)
        .any(|e| e[1].partial_cmp(&e[0]) != Some(Ordering::Less))
    {
        SweepStatus::NonMonotone
    } else if orders.iter().all(|o| (o - NOMINAL_ORDER).abs() <= ORDER_BAND) {
        SweepStatus::Converged
    } else {
        SweepStatus::OrderMismatch
    };
    (orders, status)
}

fn max_diff(a: &TensorJet, b: &TensorJet) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Replaces the closed-form metric partials by central differences at each
/// step and measures how fast Christoffel symbols, Riemann and Ricci
/// approach their exact values.
pub fn convergence_sweep(config: &ScenarioConfig, steps: &[f64]) -> Result<SweepReport> {
    let (chart, region) = config.validate()?;
    if steps.len() < 3 {
        return Err(invalid("steps", "need at least three step sizes"));
    }
    if steps.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return Err(invalid("steps", "step sizes must be positive"));
    }
    if steps.windows(2).any(|h| h[1] >= h[0]) {
        return Err(invalid("steps", "step sizes must be strictly decreasing"));
    }
    let points = sample_points(&region, config.n_points, config.seed);
    let exact: Vec<_> = points.iter().map(|p| curvature(&chart, *p)).collect::<Result<_>>()?;

    let names = ["christoffel", "riemann", "ricci"];
    let mut errors = vec![Vec::with_capacity(steps.len()); names.len()];
    for &h in steps {
        let fd = FiniteDifferenceChart::new(&chart, h);
        let mut worst = [0.0f64; 3];
        for (p, ex) in points.iter().zip(&exact) {
            let approx = curvature(&fd, *p)?;
            worst[0] = worst[0].max(max_diff(approx.frame().christoffel(), ex.frame().christoffel()));
            worst[1] = worst[1].max(max_diff(approx.riemann_tensor(), ex.riemann_tensor()));
            worst[2] = worst[2].max(max_diff(approx.ricci_tensor(), ex.ricci_tensor()));
        }
        for (e, w) in errors.iter_mut().zip(worst) {
            e.push(w);
        }
    }

    let quantities: Vec<SweepQuantity> = names
        .iter()
        .zip(errors)
        .map(|(name, errors)| {
            let (orders, status) = classify(steps, &errors);
            SweepQuantity {
                name: name.to_string(),
                errors,
                orders,
                status,
            }
        })
        .collect();
    let passed = quantities
        .iter()
        .all(|q| matches!(q.status, SweepStatus::Exact | SweepStatus::Converged));
    Ok(SweepReport {
        schema: SCHEMA_VERSION,
        chart: chart.label(),
        points,
        steps: steps.to_vec(),
        nominal_order: NOMINAL_ORDER,
        quantities,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let h = [1e-2, 5e-3, 2.5e-3];
        assert_eq!(classify(&h, &[0.0, 0.0, 0.0]).1, SweepStatus::Exact);
        assert_eq!(classify(&h, &[4.0, 1.0, 0.25]).1, SweepStatus::Converged);
        assert_eq!(classify(&h, &[2.0, 1.0, 0.5]).1, SweepStatus::OrderMismatch);
        assert_eq!(classify(&h, &[1.0, 2.0, 0.5]).1, SweepStatus::NonMonotone);
        let (orders, _) = classify(&h, &[4.0, 1.0, 0.25]);
        assert!(orders.iter().all(|o| (o - 2.0).abs() < 1e-12));
    }

    #[test]
    fn step_list_is_validated() {
        let c = ScenarioConfig::new("minkowski", vec![crate::verify::Check::Geometry]);
        assert!(convergence_sweep(&c, &[1e-2, 5e-3]).is_err());
        assert!(convergence_sweep(&c, &[1e-2, 1e-2, 5e-3]).is_err());
        assert!(convergence_sweep(&c, &[1e-2, -5e-3, 1e-3]).is_err());
    }

    #[test]
    fn minkowski_is_exact() {
        let mut c = ScenarioConfig::new("minkowski", vec![crate::verify::Check::Geometry]);
        c.n_points = 2;
        let r = convergence_sweep(&c, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!(r.passed);
        assert!(r.quantities.iter().all(|q| q.status == SweepStatus::Exact));
    }
}
