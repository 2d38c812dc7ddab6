//! Flat-space first- and second-order systems, with partial derivatives and
//! the Minkowski metric only.

use crate::error::{Error, Result};
use crate::measure::{flat4, flat_rank3, max_abs, Acc, Deviation, Mat4, Rank3, Summed, Vec4};
use crate::spin2_fields::flat::{eta, ETA};
use crate::spin2_fields::Spin2Multiplet;
use crate::tensor::TensorJet;

/// Residuals of the four first-order equations.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatResiduals {
    /// `∂^aΦ_a`.
    pub scalar: Summed<f64>,
    /// `½∂_aΦ − ⅓∂^bΦ_{ab} − Φ_a`.
    pub vector: Summed<Vec4>,
    /// The symmetric rank-2 equation.
    pub rank2: Summed<Mat4>,
    /// The rank-3 equation minus `Φ_{abc}`.
    pub rank3: Summed<Rank3>,
}

impl FlatResiduals {
    /// Largest residual component against the largest summand (or `floor`
    /// if that is larger).
    pub fn deviation(&self, floor: f64) -> Deviation {
        let mut values = vec![self.scalar.value];
        values.extend(self.vector.value);
        values.extend(flat4(&self.rank2.value));
        values.extend(flat_rank3(&self.rank3.value));
        let scale = [self.scalar.scale, self.vector.scale, self.rank2.scale, self.rank3.scale]
            .iter()
            .fold(floor, |m, s| m.max(*s));
        Deviation::new(max_abs(&values), scale)
    }
}

fn need(t: &TensorJet, order: u8) -> Result<()> {
    if t.order() < order {
        Err(Error::jet_depth(order, t.order()))
    } else {
        Ok(())
    }
}

/// `∂_k` of a component's base value.
fn dv(t: &TensorJet, idx: &[usize], k: usize) -> f64 {
    t.get(idx).partial(&[k]).expect("order checked")
}

pub fn flat_first_order_residuals(m: &Spin2Multiplet) -> Result<FlatResiduals> {
    need(&m.phi, 1)?;
    need(&m.phi1, 1)?;
    need(&m.phi2, 1)?;
    need(&m.phi3, 1)?;

    let mut scalar = Acc::default();
    for a in 0..4 {
        scalar.push(ETA[a] * dv(&m.phi1, &[a], a));
    }

    let vector: [Acc; 4] = std::array::from_fn(|a| {
        let mut acc = Acc::default().with(0.5 * dv(&m.phi, &[], a));
        for b in 0..4 {
            acc.push(-ETA[b] * dv(&m.phi2, &[a, b], b) / 3.0);
        }
        acc.with(-m.phi1.value(&[a]))
    });

    let rank2: [[Acc; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = Acc::default();
            for k in 0..4 {
                acc.push(0.5 * ETA[k] * dv(&m.phi3, &[k, a, b], k));
                acc.push(0.5 * ETA[k] * dv(&m.phi3, &[k, b, a], k));
                if a == b {
                    for n in 0..4 {
                        acc.push(-0.25 * eta(a, b) * ETA[k] * ETA[n] * dv(&m.phi3, &[k, n, n], k));
                    }
                    acc.push(-0.5 * eta(a, b) * ETA[k] * dv(&m.phi1, &[k], k));
                }
            }
            acc.with(dv(&m.phi1, &[b], a)).with(dv(&m.phi1, &[a], b))
        })
    });

    let rank3: [[[Acc; 4]; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                let mut acc = Acc::default()
                    .with(dv(&m.phi2, &[b, c], a))
                    .with(-dv(&m.phi2, &[a, c], b));
                for k in 0..4 {
                    acc.push(eta(b, c) * ETA[k] * dv(&m.phi2, &[a, k], k) / 3.0);
                    acc.push(-eta(a, c) * ETA[k] * dv(&m.phi2, &[b, k], k) / 3.0);
                }
                acc.with(-m.phi3.value(&[a, b, c]))
            })
        })
    });

    Ok(FlatResiduals {
        scalar: Summed::from_acc(scalar),
        vector: Summed::<Vec4>::from_accs(vector),
        rank2: Summed::<Mat4>::from_accs(rank2),
        rank3: Summed::<Rank3>::from_accs(rank3),
    })
}

/// `∂_i∂_j` of a component's base value.
fn d2v(t: &TensorJet, idx: &[usize], i: usize, j: usize) -> f64 {
    t.get(idx).partial(&[i, j]).expect("order checked")
}

/// The second-order pair: `½∇²Φ − ⅓∂^k∂^lΦ_{kl}` and
/// `(∂_a∂_b + ½η_{ab}∇²)Φ − ¼η_{ab}∇²Φ^c_c + ∇²Φ_{ab} − ∂_a∂^lΦ_{bl} − ∂_b∂^lΦ_{al}`.
pub fn flat_second_order_residuals(phi: &TensorJet, phi2: &TensorJet) -> Result<(Summed<f64>, Summed<Mat4>)> {
    need(phi, 2)?;
    need(phi2, 2)?;
    let mut scalar = Acc::default();
    for k in 0..4 {
        scalar.push(0.5 * ETA[k] * d2v(phi, &[], k, k));
        for l in 0..4 {
            scalar.push(-ETA[k] * ETA[l] * d2v(phi2, &[k, l], k, l) / 3.0);
        }
    }
    let rank2: [[Acc; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = Acc::default().with(d2v(phi, &[], a, b));
            for k in 0..4 {
                if a == b {
                    acc.push(0.5 * eta(a, b) * ETA[k] * d2v(phi, &[], k, k));
                    for c in 0..4 {
                        acc.push(-0.25 * eta(a, b) * ETA[k] * ETA[c] * d2v(phi2, &[c, c], k, k));
                    }
                }
                acc.push(ETA[k] * d2v(phi2, &[a, b], k, k));
                acc.push(-ETA[k] * d2v(phi2, &[b, k], a, k));
                acc.push(-ETA[k] * d2v(phi2, &[a, k], b, k));
            }
            acc
        })
    });
    Ok((Summed::from_acc(scalar), Summed::<Mat4>::from_accs(rank2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;
    use crate::spin2_fields::{flat_gauge_multiplet, GaugeGenerator, GeneratorFamily};

    #[test]
    fn zero_multiplet_has_zero_residuals() {
        let m = Spin2Multiplet::zero([0.0; 4]);
        let r = flat_first_order_residuals(&m).unwrap();
        assert_eq!(r.deviation(0.0).absolute, 0.0);
        let (s, t) = flat_second_order_residuals(&m.phi, &m.phi2).unwrap();
        assert_eq!((s.value, max_abs(&flat4(&t.value))), (0.0, 0.0));
    }

    #[test]
    fn gauge_multiplet_solves_flat_system() {
        for seed in 0..4 {
            let p = [0.3, -0.1, 0.7, 1.2];
            let lam = GaugeGenerator::random(seed, 4, GeneratorFamily::Polynomial).partials(&p, 3);
            let m = flat_gauge_multiplet(&lam).unwrap();
            let r = flat_first_order_residuals(&m).unwrap();
            assert!(r.deviation(m.scale).relative() < 1e-13, "{:?}", r.deviation(m.scale));
            let (s, t) = flat_second_order_residuals(&m.phi, &m.phi2).unwrap();
            assert!(s.value.abs() <= 1e-13 * s.scale);
            assert!(max_abs(&flat4(&t.value)) <= 1e-13 * t.scale);
            assert!(s.scale > 0.0 && t.scale > 0.0);
        }
    }

    #[test]
    fn x_dot_x_second_order_values() {
        // Φ = η_{μν} x^μ x^ν, Φ_{ab} = 0, worked by hand: ½∇²Φ = 4 and the
        // rank-2 residual is 2η_{ab} + ½η_{ab}·8 = 6η_{ab}
        let p = [0.4, 0.1, -0.2, 0.9];
        let x: Vec<Jet> = (0..4).map(|m| Jet::variable(m, p[m], 3)).collect();
        let xx = (0..4).fold(Jet::zero(3), |acc, m| acc + (x[m] * x[m]).scale(ETA[m]));
        let phi = TensorJet::scalar(xx.truncate(2), p);
        let phi2 = TensorJet::zeros(0, 2, 2, p);
        let (s, t) = flat_second_order_residuals(&phi, &phi2).unwrap();
        assert!((s.value - 4.0).abs() < 1e-14);
        for a in 0..4 {
            for b in 0..4 {
                assert!((t.value[a][b] - 6.0 * eta(a, b)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rank2_perturbation_is_detected() {
        let p = [0.2, 0.5, -0.3, 0.1];
        let lam = GaugeGenerator::random(5, 4, GeneratorFamily::Polynomial).partials(&p, 3);
        let mut m = flat_gauge_multiplet(&lam).unwrap();
        // δ on the value and on ∂_1 of Φ_01 = Φ_10
        let delta = Jet::from_partials(2, |e| match e {
            [0, 0, 0, 0] | [0, 1, 0, 0] => 1e-3,
            _ => 0.0,
        });
        m.perturb_rank2(0, 1, delta);
        let r = flat_first_order_residuals(&m).unwrap();
        assert!(r.deviation(m.scale).relative() > 1e-6);
    }

    #[test]
    fn shallow_jets_are_rejected() {
        let p = [0.0; 4];
        let phi = TensorJet::zeros(0, 0, 1, p);
        let phi2 = TensorJet::zeros(0, 2, 2, p);
        assert!(matches!(
            flat_second_order_residuals(&phi, &phi2),
            Err(Error::JetDepth { .. })
        ));
    }
}
