//! Identity checks on the geometry engine.
//!
//! Each check evaluates both sides of an exact identity by different
//! routes and reports the max-norm difference against the largest summand.

use crate::error::{Error, Result};
use crate::geometry::curvature::CurvatureBundle;
use crate::geometry::frame::{covariant_derivative, LocalFrame};
use crate::measure::{Acc, Deviation};
use crate::tensor::{indices, TensorJet};

/// `∇_α g_{βγ}` over every stored jet level, relative to the largest metric
/// coefficient.
pub fn metric_compatibility(frame: &LocalFrame) -> Deviation {
    let nabla_g = covariant_derivative(frame.metric(), frame).expect("metric jet has order 3");
    Deviation::new(nabla_g.max_abs(), frame.metric().max_abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiemannSymmetry {
    /// `R^ρ_{σμν} + R^ρ_{σνμ}`.
    pub antisymmetry: Deviation,
    /// `R^ρ_{σμν} + R^ρ_{μνσ} + R^ρ_{νσμ}`.
    pub cyclic: Deviation,
}

pub fn riemann_symmetries(bundle: &CurvatureBundle) -> RiemannSymmetry {
    let scale = bundle.riemann_scale();
    let mut anti = 0.0f64;
    let mut cyclic = 0.0f64;
    for i in indices(4) {
        let (r, s, m, n) = (i[0], i[1], i[2], i[3]);
        anti = anti.max((bundle.riemann(r, s, m, n) + bundle.riemann(r, s, n, m)).abs());
        let c = bundle.riemann(r, s, m, n) + bundle.riemann(r, m, n, s) + bundle.riemann(r, n, s, m);
        cyclic = cyclic.max(c.abs());
    }
    RiemannSymmetry {
        antisymmetry: Deviation::new(anti, scale),
        cyclic: Deviation::new(cyclic, scale),
    }
}

fn require_order(lambda: &TensorJet, needed: u8) -> Result<()> {
    if lambda.order() < needed {
        Err(Error::jet_depth(needed, lambda.order()))
    } else {
        Ok(())
    }
}

/// `(∇_β∇_α − ∇_α∇_β) Λ_ρ` from nested jets against `R_{βαρσ} Λ^σ` from the
/// curvature bundle.
pub fn ricci_identity_check(lambda: &TensorJet, bundle: &CurvatureBundle) -> Result<Deviation> {
    require_order(lambda, 2)?;
    let frame = bundle.frame();
    let d1 = covariant_derivative(lambda, frame)?;
    let d2 = covariant_derivative(&d1, frame)?;
    let lam_up: [f64; 4] = std::array::from_fn(|s| (0..4).map(|k| frame.ginv(s, k) * lambda.value(&[k])).sum());
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in indices(3) {
        let (b, a, r) = (i[0], i[1], i[2]);
        let lhs = Acc::default().with(d2.value(&[b, a, r])).with(-d2.value(&[a, b, r]));
        let mut rhs = Acc::default();
        for s in 0..4 {
            rhs.push(bundle.riemann_down(b, a, r, s) * lam_up[s]);
        }
        worst = worst.max((lhs.sum - rhs.sum).abs());
        scale = scale.max(lhs.scale).max(rhs.scale);
    }
    Ok(Deviation::new(worst, scale))
}

/// `[∇^α∇_α, ∇^β] Λ_β + ∇^α(R_{ασ} Λ^σ)`: the left part by triple nested
/// covariant differentiation, the right part from Ricci and its covariant
/// derivative.
pub fn commutator_check(lambda: &TensorJet, bundle: &CurvatureBundle) -> Result<Deviation> {
    require_order(lambda, 3)?;
    let frame = bundle.frame();
    let ginv = frame.ginv_matrix();
    let d1 = covariant_derivative(lambda, frame)?;
    let d2 = covariant_derivative(&d1, frame)?;
    let d3 = covariant_derivative(&d2, frame)?;

    // □(∇^βΛ_β) − ∇^β(□Λ_β)
    let mut lhs = Acc::default();
    for i in indices(4) {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        lhs.push(ginv[a][b] * ginv[c][d] * d3.value(&[a, b, c, d]));
        lhs.push(-ginv[a][d] * ginv[b][c] * d3.value(&[a, b, c, d]));
    }

    // −∇^α(R_{ασ}Λ^σ) = −g^{αλ}[(∇_λ R_{ασ}) Λ^σ + R_{ασ} g^{σκ} ∇_λ Λ_κ]
    let nabla_ricci = bundle.nabla_ricci();
    let mut rhs = Acc::default();
    for i in indices(3) {
        let (a, l, s) = (i[0], i[1], i[2]);
        for k in 0..4 {
            let w = -ginv[a][l] * ginv[s][k];
            rhs.push(w * nabla_ricci.value(&[l, a, s]) * lambda.value(&[k]));
            rhs.push(w * bundle.ricci(a, s) * d1.value(&[l, k]));
        }
    }
    Ok(Deviation::new((lhs.sum - rhs.sum).abs(), lhs.scale.max(rhs.scale)))
}

/// `∇_ρR^ρ_{αβσ} + ∇_ρR^ρ_{βασ} − (∇_αR_{βσ} + ∇_βR_{ασ} − 2∇_σR_{βα})`.
pub fn bianchi_contracted_check(bundle: &CurvatureBundle) -> Deviation {
    let nabla_riemann = bundle.nabla_riemann();
    let nabla_ricci = bundle.nabla_ricci();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in indices(3) {
        let (a, b, s) = (i[0], i[1], i[2]);
        let mut lhs = Acc::default();
        for r in 0..4 {
            lhs.push(nabla_riemann.value(&[r, r, a, b, s]));
            lhs.push(nabla_riemann.value(&[r, r, b, a, s]));
        }
        let rhs = Acc::default()
            .with(nabla_ricci.value(&[a, b, s]))
            .with(nabla_ricci.value(&[b, a, s]))
            .with(-2.0 * nabla_ricci.value(&[s, b, a]));
        worst = worst.max((lhs.sum - rhs.sum).abs());
        scale = scale.max(lhs.scale).max(rhs.scale);
    }
    // ∇R vanishes identically on maximally symmetric charts, so the
    // summands inside the covariant derivatives set the scale too
    Deviation::new(worst, scale.max(2.0 * bundle.nabla_scale()))
}

/// `max |R_{αβ}|` against the Riemann scale; vanishes on vacuum charts.
pub fn ricci_flatness(bundle: &CurvatureBundle) -> Deviation {
    Deviation::new(bundle.ricci_tensor().max_abs_value(), bundle.riemann_scale())
}

/// `R_{αβ} − c g_{αβ}` for a maximally symmetric chart with expected
/// factor `c`, relative to `|c| max |g|`.
pub fn ricci_proportionality(bundle: &CurvatureBundle, factor: f64) -> Deviation {
    let frame = bundle.frame();
    let mut worst = 0.0f64;
    let mut gmax = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            worst = worst.max((bundle.ricci(a, b) - factor * frame.g(a, b)).abs());
            gmax = gmax.max(frame.g(a, b).abs());
        }
    }
    Deviation::new(worst, factor.abs() * gmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog::MetricChart;
    use crate::geometry::curvature::curvature;
    use crate::jet::Jet;

    fn cubic_lambda(p: [f64; 4]) -> TensorJet {
        let x: Vec<Jet> = (0..4).map(|m| Jet::variable(m, p[m], 3)).collect();
        TensorJet::from_fn(0, 1, 3, p, |i| match i[0] {
            0 => x[0] * x[1] * x[1] + x[3],
            1 => x[2].powi(3) - 0.5 * x[0] * x[3],
            2 => x[1] * x[2] * x[3],
            _ => x[0] * x[0] * x[0] + x[1],
        })
    }

    #[test]
    fn minkowski_checks_are_exactly_zero() {
        let p = [0.3, 0.4, -0.2, 1.0];
        let b = curvature(&MetricChart::minkowski(), p).unwrap();
        assert_eq!(commutator_check(&cubic_lambda(p), &b).unwrap().absolute, 0.0);
        assert_eq!(bianchi_contracted_check(&b).absolute, 0.0);
        assert_eq!(metric_compatibility(b.frame()).absolute, 0.0);
    }

    #[test]
    fn identities_hold_on_schwarzschild() {
        let p = [0.1, 5.0, 1.0, 0.5];
        let b = curvature(&MetricChart::schwarzschild(1.0).unwrap(), p).unwrap();
        let lam = cubic_lambda(p);
        assert!(ricci_identity_check(&lam, &b).unwrap().relative() < 1e-12);
        assert!(commutator_check(&lam, &b).unwrap().relative() < 1e-10);
        assert!(bianchi_contracted_check(&b).relative() < 1e-9);
        let sym = riemann_symmetries(&b);
        assert!(sym.antisymmetry.relative() < 1e-12 && sym.cyclic.relative() < 1e-12);
    }

    #[test]
    fn flipped_riemann_sign_is_detected() {
        // The Ricci identity must fail if curvature had the opposite sign:
        // compare against -R by checking the deviation is ~ the full scale.
        let p = [0.7, 0.2, 0.1, -0.3];
        let b = curvature(&MetricChart::de_sitter(0.5).unwrap(), p).unwrap();
        let lam = cubic_lambda(p);
        let frame = b.frame();
        let d2 = covariant_derivative(&covariant_derivative(&lam, frame).unwrap(), frame).unwrap();
        let mut agree = 0.0f64;
        let mut flipped = 0.0f64;
        for i in indices(3) {
            let (bb, a, r) = (i[0], i[1], i[2]);
            let lhs = d2.value(&[bb, a, r]) - d2.value(&[a, bb, r]);
            let rhs: f64 = (0..4)
                .map(|s| {
                    let up: f64 = (0..4).map(|k| frame.ginv(s, k) * lam.value(&[k])).sum();
                    b.riemann_down(bb, a, r, s) * up
                })
                .sum();
            agree = agree.max((lhs - rhs).abs());
            flipped = flipped.max((lhs + rhs).abs());
        }
        assert!(agree < 1e-12 * flipped, "agree {agree} flipped {flipped}");
    }

    #[test]
    fn jet_depth_is_enforced() {
        let p = [0.0; 4];
        let b = curvature(&MetricChart::minkowski(), p).unwrap();
        let shallow = cubic_lambda(p).truncate(2);
        assert!(matches!(commutator_check(&shallow, &b), Err(Error::JetDepth { .. })));
    }
}
