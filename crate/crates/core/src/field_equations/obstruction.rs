//! Closed-form curvature obstructions. These use `Λ`, its first covariant
//! derivative and the curvature bundle, never deeper derivatives of `Λ`.

use crate::error::{Error, Result};
use crate::geometry::{covariant_derivative, CurvatureBundle};
use crate::measure::{Acc, Mat4, Summed, Vec4};
use crate::tensor::{indices, TensorJet};

/// `S[ρ][α][β][σ] = R^ρ_{α β}{}^σ + R^ρ_{β α}{}^σ`, symmetric in `(ρ, σ)`.
pub fn symmetrized_riemann(bundle: &CurvatureBundle) -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut mixed = [[[[0.0; 4]; 4]; 4]; 4];
    for i in indices(4) {
        mixed[i[0]][i[1]][i[2]][i[3]] = bundle.riemann_mixed(i[0], i[1], i[2], i[3]);
    }
    let mut s = [[[[0.0; 4]; 4]; 4]; 4];
    for i in indices(4) {
        let (r, a, b, sg) = (i[0], i[1], i[2], i[3]);
        s[r][a][b][sg] = mixed[r][a][b][sg] + mixed[r][b][a][sg];
    }
    s
}

/// The first-order data of `Λ` the formulas need.
struct GaugeData {
    lam_up: Vec4,
    /// `∇_ρΛ_σ` indexed `[ρ][σ]`.
    dl: Mat4,
    /// `∇^γΛ_γ` with its summands.
    div: Acc,
}

fn gauge_data(lambda: &TensorJet, bundle: &CurvatureBundle) -> Result<GaugeData> {
    if lambda.upper() != 0 || lambda.lower() != 1 {
        return Err(Error::InvalidParameter {
            name: "lambda".into(),
            reason: "gauge generator must be a covector".into(),
        });
    }
    let frame = bundle.frame();
    let d = covariant_derivative(&lambda.truncate(1), frame)?;
    let dl: Mat4 = std::array::from_fn(|r| std::array::from_fn(|s| d.value(&[r, s])));
    let lam_up = std::array::from_fn(|s| (0..4).map(|k| frame.ginv(s, k) * lambda.value(&[k])).sum());
    let mut div = Acc::default();
    for i in indices(2) {
        div.push(frame.ginv(i[0], i[1]) * dl[i[0]][i[1]]);
    }
    Ok(GaugeData { lam_up, dl, div })
}

/// `∇_ρ(R^{ρσ}Λ_σ) = g^{ρλ}[(∇_λR_{ρβ})Λ^β + R_{ρβ}g^{βκ}∇_λΛ_κ]`.
fn ricci_flux_divergence(g: &GaugeData, bundle: &CurvatureBundle) -> Acc {
    let frame = bundle.frame();
    let nric = bundle.nabla_ricci();
    let mut acc = Acc::default();
    for i in indices(3) {
        let (a, l, b) = (i[0], i[1], i[2]);
        let w = frame.ginv(a, l);
        if w == 0.0 {
            continue;
        }
        acc.push(w * nric.value(&[l, a, b]) * g.lam_up[b]);
        for k in 0..4 {
            let h = frame.ginv(b, k);
            if h != 0.0 {
                acc.push(w * bundle.ricci(a, b) * h * g.dl[l][k]);
            }
        }
    }
    acc
}

/// `−⅔ ∇^α(R_{αβ}Λ^β)`.
pub fn obstruction_scalar(lambda: &TensorJet, bundle: &CurvatureBundle) -> Result<Summed<f64>> {
    let g = gauge_data(lambda, bundle)?;
    let acc = ricci_flux_divergence(&g, bundle);
    Ok(Summed::new(-2.0 / 3.0 * acc.sum, 2.0 / 3.0 * acc.scale))
}

fn riemann_term_with(g: &GaugeData, s: &[[[[f64; 4]; 4]; 4]; 4], factor: f64) -> [[Acc; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = Acc::default();
            for i in indices(2) {
                let (r, sg) = (i[0], i[1]);
                let c = s[r][a][b][sg];
                if c != 0.0 {
                    acc.push(factor * g.dl[r][sg] * c);
                }
            }
            acc
        })
    })
}

/// `(∇_ρΛ_σ)(R^ρ_{α β}{}^σ + R^ρ_{β α}{}^σ)`.
pub fn riemann_term(lambda: &TensorJet, bundle: &CurvatureBundle) -> Result<Summed<Mat4>> {
    let g = gauge_data(lambda, bundle)?;
    Ok(Summed::<Mat4>::from_accs(riemann_term_with(
        &g,
        &symmetrized_riemann(bundle),
        1.0,
    )))
}

/// Everything in the rank-2 obstruction except the bare-Riemann term.
fn ricci_part(g: &GaugeData, bundle: &CurvatureBundle) -> [[Acc; 4]; 4] {
    let frame = bundle.frame();
    let flux = ricci_flux_divergence(g, bundle);
    let nric = bundle.nabla_ricci();
    let rmix: Mat4 = std::array::from_fn(|a| std::array::from_fn(|r| bundle.ricci_mixed(a, r)));
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = Acc::default();
            let gab = frame.g(a, b);
            if gab != 0.0 {
                acc.push(gab * flux.sum);
                acc.scale = acc.scale.max(gab.abs() * flux.scale);
            }
            for s in 0..4 {
                acc.push(-2.0 * g.lam_up[s] * nric.value(&[s, a, b]));
            }
            for r in 0..4 {
                acc.push(-1.5 * rmix[b][r] * g.dl[a][r]);
                acc.push(-1.5 * rmix[a][r] * g.dl[b][r]);
                acc.push(0.5 * rmix[b][r] * g.dl[r][a]);
                acc.push(0.5 * rmix[a][r] * g.dl[r][b]);
            }
            acc
        })
    })
}

fn merge(x: [[Acc; 4]; 4], y: [[Acc; 4]; 4]) -> [[Acc; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| Acc {
            sum: x[a][b].sum + y[a][b].sum,
            scale: x[a][b].scale.max(y[a][b].scale),
        })
    })
}

/// `g_{αβ}∇_ρ(R^{ρσ}Λ_σ) − 2Λ^σ∇_σR_{αβ} + (∇_ρΛ_σ)(R^ρ_{α β}{}^σ + R^ρ_{β α}{}^σ)
/// − (3/2)[R_β{}^ρ∇_αΛ_ρ + R_α{}^ρ∇_βΛ_ρ] + ½[R_β{}^ρ∇_ρΛ_α + R_α{}^ρ∇_ρΛ_β]`.
pub fn obstruction_rank2(lambda: &TensorJet, bundle: &CurvatureBundle) -> Result<Summed<Mat4>> {
    let g = gauge_data(lambda, bundle)?;
    let riem = riemann_term_with(&g, &symmetrized_riemann(bundle), 1.0);
    Ok(Summed::<Mat4>::from_accs(merge(ricci_part(&g, bundle), riem)))
}

/// The rank-2 obstruction with the `A = ½` term included. Every summand
/// carries a Ricci factor.
pub fn obstruction_rank2_nonminimal(lambda: &TensorJet, bundle: &CurvatureBundle) -> Result<Summed<Mat4>> {
    let g = gauge_data(lambda, bundle)?;
    let mut accs = ricci_part(&g, bundle);
    for (a, row) in accs.iter_mut().enumerate() {
        for (b, acc) in row.iter_mut().enumerate() {
            let r = bundle.ricci(a, b);
            acc.push(-0.5 * r * g.div.sum);
            acc.scale = acc.scale.max(0.5 * r.abs() * g.div.scale);
        }
    }
    Ok(Summed::<Mat4>::from_accs(accs))
}

/// What the gauge multiplet feeds into the non-minimal term:
/// `2A(R^ρ_{α β}{}^σ + R^ρ_{β α}{}^σ)∇_ρΛ_σ + A R_{αβ}∇^γΛ_γ`.
pub fn nonminimal_contribution(lambda: &TensorJet, bundle: &CurvatureBundle, coupling: f64) -> Result<Summed<Mat4>> {
    let g = gauge_data(lambda, bundle)?;
    let mut accs = riemann_term_with(&g, &symmetrized_riemann(bundle), 2.0 * coupling);
    for (a, row) in accs.iter_mut().enumerate() {
        for (b, acc) in row.iter_mut().enumerate() {
            let r = coupling * bundle.ricci(a, b);
            acc.push(r * g.div.sum);
            acc.scale = acc.scale.max(r.abs() * g.div.scale);
        }
    }
    Ok(Summed::<Mat4>::from_accs(accs))
}

/// `A(R^ρ_{α β}{}^σ + R^ρ_{β α}{}^σ)Φ_{ρσ}` contracted against a given
/// rank-2 field.
pub fn nonminimal_term(phi2: &TensorJet, bundle: &CurvatureBundle, coupling: f64) -> Summed<Mat4> {
    let s = symmetrized_riemann(bundle);
    Summed::<Mat4>::from_accs(std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = Acc::default();
            for i in indices(2) {
                acc.push(coupling * s[i[0]][a][b][i[1]] * phi2.value(&i));
            }
            acc
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{curvature, MetricChart};
    use crate::measure::{flat4, max_abs, Deviation};
    use crate::spin2_fields::{gauge_scalar_and_rank2, GaugeGenerator, GeneratorFamily};

    fn lam(seed: u64, p: [f64; 4]) -> TensorJet {
        GaugeGenerator::random(seed, 4, GeneratorFamily::PolynomialTrig).partials(&p, 3)
    }

    #[test]
    fn minkowski_obstructions_vanish() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let b = curvature(&MetricChart::minkowski(), p).unwrap();
        let l = lam(1, p);
        assert_eq!(obstruction_scalar(&l, &b).unwrap().value, 0.0);
        assert_eq!(max_abs(&flat4(&obstruction_rank2(&l, &b).unwrap().value)), 0.0);
        assert_eq!(
            max_abs(&flat4(&obstruction_rank2_nonminimal(&l, &b).unwrap().value)),
            0.0
        );
        assert_eq!(
            max_abs(&flat4(&nonminimal_contribution(&l, &b, 0.7).unwrap().value)),
            0.0
        );
    }

    #[test]
    fn schwarzschild_keeps_only_the_riemann_term() {
        let p = [0.3, 5.0, 1.2, 0.7];
        let b = curvature(&MetricChart::schwarzschild(1.0).unwrap(), p).unwrap();
        let l = lam(4, p);
        let s = obstruction_scalar(&l, &b).unwrap();
        assert!(s.value.abs() <= 1e-12 * s.scale.max(1.0));
        let full = obstruction_rank2(&l, &b).unwrap();
        let riem = riemann_term(&l, &b).unwrap();
        assert!(max_abs(&flat4(&riem.value)) > 1e-4);
        let d = Deviation::between(&flat4(&full.value), &flat4(&riem.value), full.scale);
        assert!(d.relative() < 1e-12);
        let nm = obstruction_rank2_nonminimal(&l, &b).unwrap();
        assert!(max_abs(&flat4(&nm.value)) <= 1e-12 * full.scale);
    }

    #[test]
    fn contribution_matches_direct_contraction() {
        for (chart, p) in [
            (MetricChart::schwarzschild(1.0).unwrap(), [0.0, 5.0, 1.0, 0.5]),
            (MetricChart::de_sitter(0.3).unwrap(), [0.2, 0.1, -0.4, 0.9]),
            (MetricChart::frw(0.5).unwrap(), [1.4, 0.3, 0.1, -0.2]),
        ] {
            let b = curvature(&chart, p).unwrap();
            let l = lam(8, p);
            let (_, phi2) = gauge_scalar_and_rank2(&l, b.frame()).unwrap();
            for a in [0.0, 0.25, 0.5, 1.0] {
                let f = nonminimal_contribution(&l, &b, a).unwrap();
                let d = nonminimal_term(&phi2, &b, a);
                let dev = Deviation::between(&flat4(&f.value), &flat4(&d.value), f.scale.max(d.scale));
                assert!(dev.relative() < 1e-12, "{} A={a}: {dev:?}", chart.name());
            }
        }
    }

    #[test]
    fn symmetrized_riemann_is_symmetric_in_outer_pair() {
        let b = curvature(&MetricChart::schwarzschild(1.0).unwrap(), [0.0, 4.5, 0.9, 0.1]).unwrap();
        let s = symmetrized_riemann(&b);
        for i in indices(4) {
            let (r, a, c, sg) = (i[0], i[1], i[2], i[3]);
            assert!((s[r][a][c][sg] - s[sg][a][c][r]).abs() < 1e-14);
        }
    }
}
