use crate::error::Result;
use crate::geometry::catalog::Chart;
use crate::geometry::frame::{covariant_derivative, derivative_scale, LocalFrame};
use crate::jet::Jet;
use crate::tensor::{Point, TensorJet};

/// Christoffel symbols and curvature at one point, with jet levels.
///
/// Riemann follows `R^ρ_{σμν} = ∂_μ Γ^ρ_{νσ} − ∂_ν Γ^ρ_{μσ}
/// + Γ^ρ_{μλ} Γ^λ_{νσ} − Γ^ρ_{νλ} Γ^λ_{μσ}`, which makes
/// `(∇_β∇_α − ∇_α∇_β) Λ_ρ = R_{βαρσ} Λ^σ` hold for covectors, and Ricci is
/// `R_{σν} = R^ρ_{σρν}`.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    frame: LocalFrame,
    riemann: TensorJet,
    ricci: TensorJet,
}

/// Evaluates the full curvature bundle of a chart at a point.
pub fn curvature(chart: &dyn Chart, point: Point) -> Result<CurvatureBundle> {
    Ok(CurvatureBundle::from_frame(LocalFrame::new(chart, point)?))
}

impl CurvatureBundle {
    pub fn from_frame(frame: LocalFrame) -> Self {
        let gamma = frame.christoffel();
        let order = gamma.order() - 1;
        let dgamma: Vec<TensorJet> = (0..4)
            .map(|m| TensorJet::from_fn(1, 2, order, frame.point(), |i| gamma.get(i).d(m)))
            .collect();
        let g1 = gamma.truncate(order);
        let riemann = TensorJet::from_fn(1, 3, order, frame.point(), |i| {
            let (r, s, m, n) = (i[0], i[1], i[2], i[3]);
            let mut acc = *dgamma[m].get(&[r, n, s]) - *dgamma[n].get(&[r, m, s]);
            for l in 0..4 {
                acc += *g1.get(&[r, m, l]) * *g1.get(&[l, n, s]);
                acc -= *g1.get(&[r, n, l]) * *g1.get(&[l, m, s]);
            }
            acc
        });
        let ricci = TensorJet::from_fn(0, 2, order, frame.point(), |i| {
            (0..4).fold(Jet::zero(order), |acc, r| acc + *riemann.get(&[r, i[0], r, i[1]]))
        });
        CurvatureBundle { frame, riemann, ricci }
    }

    pub fn frame(&self) -> &LocalFrame {
        &self.frame
    }

    pub fn point(&self) -> Point {
        self.frame.point()
    }

    /// `Γ^λ_{μν}`.
    pub fn christoffel(&self, l: usize, m: usize, n: usize) -> f64 {
        self.frame.christoffel().value(&[l, m, n])
    }

    /// `∂_ρ Γ^λ_{μν}`.
    pub fn dchristoffel(&self, l: usize, m: usize, n: usize, rho: usize) -> f64 {
        self.frame.christoffel().get(&[l, m, n]).partial(&[rho]).unwrap()
    }

    /// `∂_σ ∂_ρ Γ^λ_{μν}`.
    pub fn d2christoffel(&self, l: usize, m: usize, n: usize, rho: usize, sigma: usize) -> f64 {
        self.frame.christoffel().get(&[l, m, n]).partial(&[rho, sigma]).unwrap()
    }

    /// `R^ρ_{σμν}` jet (order 1), indexed `[ρ, σ, μ, ν]`.
    pub fn riemann_tensor(&self) -> &TensorJet {
        &self.riemann
    }

    /// `R_{αβ}` jet (order 1).
    pub fn ricci_tensor(&self) -> &TensorJet {
        &self.ricci
    }

    pub fn riemann(&self, r: usize, s: usize, m: usize, n: usize) -> f64 {
        self.riemann.value(&[r, s, m, n])
    }

    /// `∂_λ R^ρ_{σμν}`.
    pub fn driemann(&self, r: usize, s: usize, m: usize, n: usize, l: usize) -> f64 {
        self.riemann.get(&[r, s, m, n]).partial(&[l]).unwrap()
    }

    pub fn ricci(&self, a: usize, b: usize) -> f64 {
        self.ricci.value(&[a, b])
    }

    /// `∂_λ R_{αβ}`.
    pub fn dricci(&self, a: usize, b: usize, l: usize) -> f64 {
        self.ricci.get(&[a, b]).partial(&[l]).unwrap()
    }

    /// `R_{ρσμν} = g_{ρκ} R^κ_{σμν}`.
    pub fn riemann_down(&self, r: usize, s: usize, m: usize, n: usize) -> f64 {
        (0..4).map(|k| self.frame.g(r, k) * self.riemann(k, s, m, n)).sum()
    }

    /// `R^ρ_{α β}{}^σ = g^{σλ} R^ρ_{αβλ}`, the contraction that multiplies
    /// `Φ_{ρσ}` in the non-minimal coupling.
    pub fn riemann_mixed(&self, rho: usize, a: usize, b: usize, sigma: usize) -> f64 {
        (0..4)
            .map(|l| self.frame.ginv(sigma, l) * self.riemann(rho, a, b, l))
            .sum()
    }

    /// `R_α{}^ρ = g^{ρκ} R_{ακ}`.
    pub fn ricci_mixed(&self, a: usize, rho: usize) -> f64 {
        (0..4).map(|k| self.frame.ginv(rho, k) * self.ricci(a, k)).sum()
    }

    /// Ricci scalar `g^{αβ} R_{αβ}`.
    pub fn ricci_scalar(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.frame.ginv(a, b) * self.ricci(a, b);
            }
        }
        s
    }

    /// `∇_λ R_{αβ}` indexed `[λ, α, β]` (order 0).
    pub fn nabla_ricci(&self) -> TensorJet {
        covariant_derivative(&self.ricci, &self.frame).expect("ricci jet has order 1")
    }

    /// `∇_λ R^ρ_{σμν}` indexed `[ρ, λ, σ, μ, ν]` (order 0).
    pub fn nabla_riemann(&self) -> TensorJet {
        covariant_derivative(&self.riemann, &self.frame).expect("riemann jet has order 1")
    }

    /// Summand scale of `∇R^ρ_{σμν}` and `∇R_{αβ}` before cancellation.
    pub fn nabla_scale(&self) -> f64 {
        derivative_scale(&self.riemann, &self.frame).max(derivative_scale(&self.ricci, &self.frame))
    }

    /// Largest |R^ρ_{σμν}| at the point.
    pub fn riemann_scale(&self) -> f64 {
        self.riemann.max_abs_value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog::MetricChart;
    use approx::assert_relative_eq;

    #[test]
    fn minkowski_is_flat() {
        let b = curvature(&MetricChart::minkowski(), [0.5, 1.0, -1.0, 2.0]).unwrap();
        assert_eq!(b.riemann_tensor().max_abs(), 0.0);
        assert_eq!(b.ricci_tensor().max_abs(), 0.0);
    }

    #[test]
    fn schwarzschild_vacuum() {
        let b = curvature(&MetricChart::schwarzschild(1.0).unwrap(), [0.0, 4.0, 1.0, 0.3]).unwrap();
        let scale = b.riemann_scale();
        assert!(scale > 1e-3);
        assert!(b.ricci_tensor().max_abs_value() <= 1e-12 * scale);
        // R^t_{rtr} = 2M / (r^2 (r - 2M)), worked by hand from the Christoffel symbols
        let r = 4.0;
        assert_relative_eq!(b.riemann(0, 1, 0, 1), 2.0 / (r * r * (r - 2.0)), epsilon = 1e-14);
    }

    #[test]
    fn de_sitter_ricci_is_minus_three_h_squared_g() {
        let h = 0.1;
        let b = curvature(&MetricChart::de_sitter(h).unwrap(), [0.3, 0.1, 0.2, -0.7]).unwrap();
        for a in 0..4 {
            for c in 0..4 {
                assert_relative_eq!(b.ricci(a, c), -3.0 * h * h * b.frame().g(a, c), epsilon = 1e-15);
            }
        }
        assert_relative_eq!(b.ricci_scalar(), -12.0 * h * h, epsilon = 1e-14);
    }

    #[test]
    fn derivative_accessors_match_jets() {
        let b = curvature(&MetricChart::frw(0.5).unwrap(), [1.1, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(b.dricci(1, 1, 0), b.ricci_tensor().get(&[1, 1]).partial(&[0]).unwrap());
        assert_eq!(
            b.d2christoffel(0, 1, 1, 0, 0),
            b.frame().christoffel().get(&[0, 1, 1]).partial(&[0, 0]).unwrap()
        );
        assert_eq!(b.nabla_riemann().rank(), 5);
        assert_eq!(b.nabla_ricci().order(), 0);
    }
}
