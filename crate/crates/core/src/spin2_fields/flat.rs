//! Partial-derivative-only versions of the gauge constructors, for the
//! Minkowski metric in Cartesian coordinates.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::spin2_fields::multiplet::Spin2Multiplet;
use crate::tensor::TensorJet;

/// Diagonal of `η_{ab}` (and of `η^{ab}`).
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn eta(a: usize, b: usize) -> f64 {
    if a == b {
        ETA[a]
    } else {
        0.0
    }
}

/// Flat gauge multiplet: `Φ = ∂^lΛ_l`,
/// `Φ_{ab} = ∂_aΛ_b + ∂_bΛ_a − ½η_{ab}∂^lΛ_l`,
/// `Φ_a = ⅓(∂_a∂^lΛ_l − ∂^l∂_lΛ_a)` and `Φ_{abc}` from the rank-3 equation.
pub fn flat_gauge_multiplet(lambda: &TensorJet) -> Result<Spin2Multiplet> {
    if lambda.order() < 3 {
        return Err(Error::jet_depth(3, lambda.order()));
    }
    let point = lambda.point();
    let l = |a: usize| *lambda.get(&[a]);
    let mut scale = lambda.max_partial();
    let mut track = |j: Jet| {
        scale = scale.max(j.max_partial());
        j
    };

    let div = (0..4).fold(Jet::zero(2), |acc, k| acc + track(l(k).d(k).scale(ETA[k])));
    let phi = TensorJet::scalar(div, point);
    let phi2 = TensorJet::from_fn(0, 2, 2, point, |i| {
        let (a, b) = (i[0], i[1]);
        l(b).d(a) + l(a).d(b) - div.scale(0.5 * eta(a, b))
    });
    let phi1 = TensorJet::from_fn(0, 1, 1, point, |i| {
        let a = i[0];
        (0..4).fold(Jet::zero(1), |acc, k| {
            acc + track((l(k).d(k).d(a) - l(a).d(k).d(k)).scale(ETA[k] / 3.0))
        })
    });
    let phi3 = flat_rank3(&phi2);
    let mut m = Spin2Multiplet::new(phi, phi1, phi2, phi3)?;
    m.scale = m.scale.max(scale);
    Ok(m)
}

/// `∂_aΦ_{bc} − ∂_bΦ_{ac} + ⅓(η_{bc}∂^kΦ_{ak} − η_{ac}∂^kΦ_{bk})`.
pub fn flat_rank3(phi2: &TensorJet) -> TensorJet {
    let order = phi2.order() - 1;
    let p = |a: usize, b: usize| *phi2.get(&[a, b]);
    let div: Vec<Jet> = (0..4)
        .map(|a| (0..4).fold(Jet::zero(order), |acc, k| acc + p(a, k).d(k).scale(ETA[k])))
        .collect();
    TensorJet::from_fn(0, 3, order, phi2.point(), |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        p(b, c).d(a) - p(a, c).d(b) + (div[a].scale(eta(b, c)) - div[b].scale(eta(a, c))).scale(1.0 / 3.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LocalFrame, MetricChart};
    use crate::spin2_fields::generator::{GaugeGenerator, GeneratorFamily};
    use crate::spin2_fields::multiplet::assemble_gauge_multiplet;

    #[test]
    fn curved_constructors_reduce_to_flat_ones() {
        let p = [0.4, -0.3, 0.8, 0.1];
        let frame = LocalFrame::new(&MetricChart::minkowski(), p).unwrap();
        for seed in 0..5 {
            let lam = GaugeGenerator::random(seed, 4, GeneratorFamily::PolynomialTrig).partials(&p, 3);
            let flat = flat_gauge_multiplet(&lam).unwrap();
            let curved = assemble_gauge_multiplet(&lam, &frame).unwrap();
            for (x, y) in [
                (&flat.phi, &curved.phi),
                (&flat.phi1, &curved.phi1),
                (&flat.phi2, &curved.phi2),
                (&flat.phi3, &curved.phi3),
            ] {
                assert_eq!(x.order(), y.order());
                assert!(x.sub(y).max_partial() <= 1e-14 * flat.scale);
            }
        }
    }

    #[test]
    fn flat_multiplet_is_structurally_sound() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let frame = LocalFrame::new(&MetricChart::minkowski(), p).unwrap();
        let lam = GaugeGenerator::random(9, 4, GeneratorFamily::Polynomial).partials(&p, 3);
        let m = flat_gauge_multiplet(&lam).unwrap();
        assert!(m.structural(&frame).unwrap().relative() < 1e-13);
    }
}
