//! Curved-space residuals by nested covariant differentiation of the
//! multiplet. Curvature enters only through the non-minimal term.

use crate::error::{Error, Result};
use crate::field_equations::obstruction::symmetrized_riemann;
use crate::geometry::{covariant_derivative, CurvatureBundle, LocalFrame};
use crate::measure::{Acc, Mat4, Rank3, Summed};
use crate::spin2_fields::Spin2Multiplet;
use crate::tensor::indices;

fn check_point(m: &Spin2Multiplet, frame: &LocalFrame) -> Result<()> {
    if m.point() != frame.point() {
        return Err(Error::PointMismatch {
            field: m.point(),
            frame: frame.point(),
        });
    }
    Ok(())
}

/// `∇^αΦ_α`.
pub fn residual_scalar_eq(m: &Spin2Multiplet, frame: &LocalFrame) -> Result<Summed<f64>> {
    check_point(m, frame)?;
    let d = covariant_derivative(&m.phi1, frame)?;
    let mut acc = Acc::default();
    for i in indices(2) {
        let g = frame.ginv(i[0], i[1]);
        if g != 0.0 {
            acc.push(g * d.value(&i));
        }
    }
    Ok(Summed::new(acc.sum, acc.scale.max(m.scale)))
}

/// Left side of the rank-2 equation with coupling `A`:
/// `½(∇^ρΦ_{ραβ} + ∇^ρΦ_{ρβα} − ½g_{αβ}∇^ρΦ_{ρσ}{}^σ) + ∇_αΦ_β + ∇_βΦ_α
/// − ½g_{αβ}∇^ρΦ_ρ − A(R^ρ_{α β}{}^σ + R^ρ_{β α}{}^σ)Φ_{ρσ}`.
pub fn residual_rank2_eq(m: &Spin2Multiplet, bundle: &CurvatureBundle, coupling: f64) -> Result<Summed<Mat4>> {
    let frame = bundle.frame();
    check_point(m, frame)?;
    let d3 = covariant_derivative(&m.phi3, frame)?;
    let d1 = covariant_derivative(&m.phi1, frame)?;
    let ginv = frame.ginv_matrix();
    let pairs: Vec<(usize, usize, f64)> = indices(2)
        .filter_map(|i| {
            let g = ginv[i[0]][i[1]];
            (g != 0.0).then_some((i[0], i[1], g))
        })
        .collect();

    // trace parts shared by every diagonal-metric entry, kept as summand lists
    let mut trace3 = Vec::new();
    for &(r, k, g) in &pairs {
        for &(n, s, h) in &pairs {
            trace3.push(g * h * d3.value(&[r, k, n, s]));
        }
    }
    let trace1: Vec<f64> = pairs.iter().map(|&(a, b, g)| g * d1.value(&[a, b])).collect();
    let riem = (coupling != 0.0).then(|| symmetrized_riemann(bundle));

    let accs: [[Acc; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = Acc::default();
            for &(r, k, g) in &pairs {
                acc.push(0.5 * g * d3.value(&[r, k, a, b]));
                acc.push(0.5 * g * d3.value(&[r, k, b, a]));
            }
            let gab = frame.g(a, b);
            if gab != 0.0 {
                for t in &trace3 {
                    acc.push(-0.25 * gab * t);
                }
                for t in &trace1 {
                    acc.push(-0.5 * gab * t);
                }
            }
            acc.push(d1.value(&[a, b]));
            acc.push(d1.value(&[b, a]));
            if let Some(s) = &riem {
                for i in indices(2) {
                    let (r, sg) = (i[0], i[1]);
                    acc.push(-coupling * s[r][a][b][sg] * m.phi2.value(&[r, sg]));
                }
            }
            acc
        })
    });
    let mut out = Summed::<Mat4>::from_accs(accs);
    out.scale = out.scale.max(m.scale);
    Ok(out)
}

/// `∇_αΦ_{βσ} − ∇_βΦ_{ασ} + ⅓(g_{βσ}∇^ρΦ_{αρ} − g_{ασ}∇^ρΦ_{βρ}) − Φ_{αβσ}`.
pub fn residual_rank3_eq(m: &Spin2Multiplet, frame: &LocalFrame) -> Result<Summed<Rank3>> {
    check_point(m, frame)?;
    let d2 = covariant_derivative(&m.phi2, frame)?;
    let div: [Vec<f64>; 4] = std::array::from_fn(|a| {
        indices(2)
            .filter(|i| frame.ginv(i[0], i[1]) != 0.0)
            .map(|i| frame.ginv(i[0], i[1]) * d2.value(&[i[1], a, i[0]]))
            .collect()
    });
    let accs: [[[Acc; 4]; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|s| {
                let mut acc = Acc::default().with(d2.value(&[a, b, s])).with(-d2.value(&[b, a, s]));
                let (gb, ga) = (frame.g(b, s), frame.g(a, s));
                for t in &div[a] {
                    if gb != 0.0 {
                        acc.push(gb * t / 3.0);
                    }
                }
                for t in &div[b] {
                    if ga != 0.0 {
                        acc.push(-ga * t / 3.0);
                    }
                }
                acc.with(-m.phi3.value(&[a, b, s]))
            })
        })
    });
    let mut out = Summed::<Rank3>::from_accs(accs);
    out.scale = out.scale.max(m.scale);
    Ok(out)
}
