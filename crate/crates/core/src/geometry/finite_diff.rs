//! Finite-difference stand-in for a catalog chart.
//!
//! Every partial `∂^e g_{αβ}` is replaced by the product of central
//! first-difference operators `D_i f = (f(x + h e_i) − f(x − h e_i)) / 2h`,
//! one per derivative direction. Each factor is second-order accurate, so
//! curvature built from these partials converges to the closed-form values
//! at order [`NOMINAL_ORDER`].

use std::collections::HashMap;

use crate::error::Result;
use crate::geometry::catalog::{Chart, MetricChart};
use crate::jet::{Jet, MAX_ORDER};
use crate::tensor::{Point, TensorJet};

pub const NOMINAL_ORDER: f64 = 2.0;

#[derive(Clone, Debug)]
pub struct FiniteDifferenceChart<'a> {
    base: &'a MetricChart,
    step: f64,
}

impl<'a> FiniteDifferenceChart<'a> {
    pub fn new(base: &'a MetricChart, step: f64) -> Self {
        assert!(step > 0.0 && step.is_finite(), "finite-difference step must be > 0");
        FiniteDifferenceChart { base, step }
    }

    pub fn step(&self) -> f64 {
        self.step
    }
}

impl Chart for FiniteDifferenceChart<'_> {
    fn label(&self) -> String {
        format!("{} [central differences, h={}]", self.base.label(), self.step)
    }

    fn check_point(&self, point: &Point) -> Result<()> {
        self.base.check_point(point)
    }

    fn metric_jet(&self, point: &Point) -> Result<TensorJet> {
        self.check_point(point)?;
        let h = self.step;
        let mut samples: HashMap<[i8; 4], [[f64; 4]; 4]> = HashMap::new();
        let mut sample = |offset: [i8; 4]| -> Result<[[f64; 4]; 4]> {
            if let Some(g) = samples.get(&offset) {
                return Ok(*g);
            }
            let q: Point = std::array::from_fn(|m| point[m] + h * f64::from(offset[m]));
            let g = self.base.g(&q)?;
            samples.insert(offset, g);
            Ok(g)
        };

        // partials[slot-order multi-index] -> matrix of D^e g
        let mut partials: HashMap<[u8; 4], [[f64; 4]; 4]> = HashMap::new();
        for slot in 0..crate::jet::coeff_count(MAX_ORDER) {
            let e = crate::jet::monomial_exponents(slot);
            let dirs: Vec<usize> = (0..4).flat_map(|m| std::iter::repeat_n(m, e[m] as usize)).collect();
            let k = dirs.len();
            let mut acc = [[0.0; 4]; 4];
            for signs in 0..(1u32 << k) {
                let mut offset = [0i8; 4];
                let mut weight = 1.0;
                for (j, &d) in dirs.iter().enumerate() {
                    if signs & (1 << j) != 0 {
                        offset[d] -= 1;
                        weight = -weight;
                    } else {
                        offset[d] += 1;
                    }
                }
                let g = sample(offset)?;
                for a in 0..4 {
                    for b in 0..4 {
                        acc[a][b] += weight * g[a][b];
                    }
                }
            }
            let norm = (2.0 * h).powi(k as i32);
            for row in acc.iter_mut() {
                for v in row.iter_mut() {
                    *v /= norm;
                }
            }
            partials.insert(e, acc);
        }
        Ok(TensorJet::from_fn(0, 2, MAX_ORDER, *point, |i| {
            Jet::from_partials(MAX_ORDER, |e| partials[&e][i[0]][i[1]])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_constant_metric() {
        let mink = MetricChart::minkowski();
        let fd = FiniteDifferenceChart::new(&mink, 1e-2);
        let p = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(fd.metric_jet(&p).unwrap(), mink.metric_jet(&p).unwrap());
    }

    #[test]
    fn first_partials_converge_quadratically() {
        let chart = MetricChart::frw(2.0 / 3.0).unwrap();
        let p = [1.2, 0.0, 0.0, 0.0];
        let exact = chart.metric_jet(&p).unwrap();
        let err = |h: f64| {
            let fd = FiniteDifferenceChart::new(&chart, h).metric_jet(&p).unwrap();
            (fd.get(&[1, 1]).partial(&[0]).unwrap() - exact.get(&[1, 1]).partial(&[0]).unwrap()).abs()
        };
        let ratio = err(1e-2) / err(5e-3);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn stencil_respects_domain() {
        let chart = MetricChart::frw(0.5).unwrap();
        let fd = FiniteDifferenceChart::new(&chart, 0.05);
        assert!(fd.metric_jet(&[0.12, 0.0, 0.0, 0.0]).is_err());
    }
}
