use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::geometry::catalog::Chart;
use crate::jet::{Jet, MAX_ORDER};
use crate::tensor::{Point, TensorJet};

/// Metric, inverse metric and Christoffel symbols as jets at one point.
///
/// This is everything the covariant-derivative engine needs; curvature is
/// deliberately not part of it (see [`super::CurvatureBundle`]).
#[derive(Clone, Debug)]
pub struct LocalFrame {
    label: String,
    point: Point,
    metric: TensorJet,
    inverse: TensorJet,
    christoffel: TensorJet,
}

impl LocalFrame {
    pub fn new(chart: &dyn Chart, point: Point) -> Result<Self> {
        let metric = chart.metric_jet(&point)?;
        Self::from_metric(chart.label(), metric)
    }

    /// Builds the frame from an order-3 metric jet.
    pub fn from_metric(label: String, metric: TensorJet) -> Result<Self> {
        if metric.order() < MAX_ORDER {
            return Err(Error::jet_depth(MAX_ORDER, metric.order()));
        }
        let point = metric.point();
        let inverse = inverse_metric(&label, &metric)?;
        let christoffel = christoffel_from(&metric, &inverse);
        Ok(LocalFrame {
            label,
            point,
            metric,
            inverse,
            christoffel,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn point(&self) -> Point {
        self.point
    }

    /// `g_{αβ}`, order 3.
    pub fn metric(&self) -> &TensorJet {
        &self.metric
    }

    /// `g^{αβ}`, order 3.
    pub fn inverse(&self) -> &TensorJet {
        &self.inverse
    }

    /// `Γ^λ_{μν}` indexed `[λ, μ, ν]`, order 2.
    pub fn christoffel(&self) -> &TensorJet {
        &self.christoffel
    }

    pub fn g(&self, a: usize, b: usize) -> f64 {
        self.metric.value(&[a, b])
    }

    pub fn ginv(&self, a: usize, b: usize) -> f64 {
        self.inverse.value(&[a, b])
    }

    /// Inverse metric values as a plain matrix.
    pub fn ginv_matrix(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|a| std::array::from_fn(|b| self.ginv(a, b)))
    }

    pub fn g_matrix(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|a| std::array::from_fn(|b| self.g(a, b)))
    }
}

/// Inverse of a matrix-valued jet: the base value is inverted directly and
/// the remaining coefficients follow from the terminating series
/// `g⁻¹ = Σ_k (−G₀⁻¹ δ)^k G₀⁻¹`, where `δ = g − G₀` has no constant term.
fn inverse_metric(label: &str, metric: &TensorJet) -> Result<TensorJet> {
    let order = metric.order();
    let point = metric.point();
    let g0 = Matrix4::from_fn(|a, b| metric.value(&[a, b]));
    let det = g0.determinant();
    let scale = g0.abs().max();
    let inv0 = g0
        .try_inverse()
        .filter(|_| det.is_finite() && det.abs() > 1e-12 * scale.powi(4))
        .ok_or_else(|| Error::DegenerateMetric {
            chart: label.to_string(),
            point,
        })?;
    let b: [[Jet; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| Jet::constant(inv0[(i, j)], order)));
    let delta: [[Jet; 4]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|j| *metric.get(&[i, j]) - Jet::constant(g0[(i, j)], order)));
    let matmul = |x: &[[Jet; 4]; 4], y: &[[Jet; 4]; 4]| -> [[Jet; 4]; 4] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).fold(Jet::zero(order), |acc, k| acc + x[i][k] * y[k][j]))
        })
    };
    let mut x = matmul(&b, &delta);
    for row in x.iter_mut() {
        for e in row.iter_mut() {
            *e = -*e;
        }
    }
    let identity: [[Jet; 4]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|j| Jet::constant(if i == j { 1.0 } else { 0.0 }, order)));
    let mut series = identity;
    let mut power = identity;
    for _ in 0..order {
        power = matmul(&power, &x);
        for i in 0..4 {
            for j in 0..4 {
                series[i][j] += power[i][j];
            }
        }
    }
    let inv = matmul(&series, &b);
    Ok(TensorJet::from_fn(2, 0, order, point, |i| inv[i[0]][i[1]]))
}

fn christoffel_from(metric: &TensorJet, inverse: &TensorJet) -> TensorJet {
    let order = metric.order() - 1;
    // dg[m][s][n] = ∂_m g_{sn}
    let dg: Vec<Vec<Vec<Jet>>> = (0..4)
        .map(|m| {
            (0..4)
                .map(|s| (0..4).map(|n| metric.get(&[s, n]).d(m)).collect())
                .collect()
        })
        .collect();
    TensorJet::from_fn(1, 2, order, metric.point(), |i| {
        let (l, m, n) = (i[0], i[1], i[2]);
        let mut acc = Jet::zero(order);
        for s in 0..4 {
            let bracket = dg[m][s][n] + dg[n][s][m] - dg[s][m][n];
            acc += inverse.get(&[l, s]).truncate(order) * bracket;
        }
        acc.scale(0.5)
    })
}

/// Christoffel symbols `Γ^λ_{μν}` at a point (order-2 jet; `value` gives the
/// symbols themselves).
pub fn christoffel(chart: &dyn Chart, point: Point) -> Result<TensorJet> {
    Ok(LocalFrame::new(chart, point)?.christoffel)
}

/// Bound on the largest summand of `∇_μ T` at the point: `max |∂T|` against
/// `max |Γ| · max |T|`. Used as the tolerance scale when `∇T` itself cancels
/// to roundoff.
pub fn derivative_scale(field: &TensorJet, frame: &LocalFrame) -> f64 {
    let dmax = field
        .components()
        .iter()
        .flat_map(|c| (0..4).map(move |m| c.d(m).value()))
        .fold(0.0f64, |a, x| a.max(x.abs()));
    dmax.max(frame.christoffel().max_abs_value() * field.max_abs_value())
}

/// Covariant derivative of a jet-valued tensor.
///
/// The new covariant index is inserted as the first lower slot, so for an
/// all-covariant field `T_{a..}` the result is `(∇T)_{μ a..}`. The output
/// has one fewer jet level than the input.
pub fn covariant_derivative(field: &TensorJet, frame: &LocalFrame) -> Result<TensorJet> {
    if field.order() == 0 {
        return Err(Error::jet_depth(1, 0));
    }
    if field.point() != frame.point() {
        return Err(Error::PointMismatch {
            field: field.point(),
            frame: frame.point(),
        });
    }
    let order = field.order() - 1;
    if frame.christoffel().order() < order {
        return Err(Error::jet_depth(order, frame.christoffel().order()));
    }
    let gamma = frame.christoffel().truncate(order);
    let (p, q) = (field.upper(), field.lower());
    let rank = p + q;
    let mut base = vec![0usize; rank];
    Ok(TensorJet::from_fn(p, q + 1, order, field.point(), |idx| {
        let mu = idx[p];
        base[..p].copy_from_slice(&idx[..p]);
        base[p..].copy_from_slice(&idx[p + 1..]);
        let mut acc = field.get(&base).d(mu);
        for slot in 0..rank {
            let a = base[slot];
            for lam in 0..4 {
                let g = if slot < p {
                    gamma.get(&[a, mu, lam])
                } else {
                    gamma.get(&[lam, mu, a])
                };
                if g.max_abs() == 0.0 {
                    continue;
                }
                base[slot] = lam;
                let term = *g * *field.get(&base);
                if slot < p {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            base[slot] = a;
        }
        acc
    }))
}
