use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{covariant_derivative, LocalFrame};
use crate::jet::Jet;
use crate::measure::{Acc, Deviation};
use crate::tensor::{indices, Point, TensorJet};

/// Independent components of each field in the massless theory.
pub const SCALAR_COMPONENTS: usize = 1;
pub const VECTOR_COMPONENTS: usize = 4;
pub const RANK2_COMPONENTS: usize = 10;
/// `6 × 4` antisymmetric pairs times a free index, less the four cyclic
/// conditions and the four trace conditions.
pub const RANK3_COMPONENTS: usize = 6 * 4 - 4 - 4;
pub const TOTAL_COMPONENTS: usize = SCALAR_COMPONENTS + VECTOR_COMPONENTS + RANK2_COMPONENTS + RANK3_COMPONENTS;

/// The wave function `(Φ, Φ_α, Φ_{αβ}, Φ_{αβσ})` at a point, each field a
/// jet. `Φ_{αβσ}` is stored densely; its symmetries are checked by the
/// validators rather than encoded.
#[derive(Clone, Debug, PartialEq)]
pub struct Spin2Multiplet {
    pub phi: TensorJet,
    pub phi1: TensorJet,
    pub phi2: TensorJet,
    pub phi3: TensorJet,
    /// Largest partial derivative among the summands that built the fields.
    pub scale: f64,
}

fn expect_valence(name: &str, t: &TensorJet, lower: usize, point: Point) -> Result<()> {
    if t.upper() != 0 || t.lower() != lower {
        return Err(Error::InvalidParameter {
            name: name.into(),
            reason: format!(
                "expected a covariant rank-{lower} field, got ({}, {})",
                t.upper(),
                t.lower()
            ),
        });
    }
    if t.point() != point {
        return Err(Error::PointMismatch {
            field: t.point(),
            frame: point,
        });
    }
    Ok(())
}

impl Spin2Multiplet {
    pub fn new(phi: TensorJet, phi1: TensorJet, phi2: TensorJet, phi3: TensorJet) -> Result<Self> {
        let point = phi.point();
        expect_valence("phi", &phi, 0, point)?;
        expect_valence("phi1", &phi1, 1, point)?;
        expect_valence("phi2", &phi2, 2, point)?;
        expect_valence("phi3", &phi3, 3, point)?;
        let scale = [&phi, &phi1, &phi2, &phi3]
            .iter()
            .fold(0.0f64, |m, t| m.max(t.max_partial()));
        Ok(Spin2Multiplet {
            phi,
            phi1,
            phi2,
            phi3,
            scale,
        })
    }

    /// All fields identically zero, with the jet orders a gauge multiplet has.
    pub fn zero(point: Point) -> Self {
        Spin2Multiplet {
            phi: TensorJet::zeros(0, 0, 2, point),
            phi1: TensorJet::zeros(0, 1, 1, point),
            phi2: TensorJet::zeros(0, 2, 2, point),
            phi3: TensorJet::zeros(0, 3, 1, point),
            scale: 0.0,
        }
    }

    pub fn point(&self) -> Point {
        self.phi.point()
    }

    /// Adds `delta` to `Φ_{ab}` and `Φ_{ba}`.
    pub fn perturb_rank2(&mut self, a: usize, b: usize, delta: Jet) {
        *self.phi2.get_mut(&[a, b]) += delta;
        if a != b {
            *self.phi2.get_mut(&[b, a]) += delta;
        }
        self.scale = self.scale.max(delta.max_partial());
    }

    /// `Φ_{αβ} − Φ_{βα}`.
    pub fn rank2_symmetry(&self) -> Deviation {
        let mut worst = 0.0f64;
        for i in indices(2) {
            worst = worst.max((self.phi2.value(&[i[0], i[1]]) - self.phi2.value(&[i[1], i[0]])).abs());
        }
        Deviation::new(worst, self.phi2.max_abs_value())
    }

    /// `Φ_{αβσ} + Φ_{βασ}`.
    pub fn rank3_antisymmetry(&self) -> Deviation {
        let mut worst = 0.0f64;
        for i in indices(3) {
            let (a, b, s) = (i[0], i[1], i[2]);
            worst = worst.max((self.phi3.value(&[a, b, s]) + self.phi3.value(&[b, a, s])).abs());
        }
        Deviation::new(worst, self.phi3.max_abs_value())
    }

    /// `Φ_{αβσ} + Φ_{βσα} + Φ_{σαβ}`.
    pub fn cyclic_identity(&self) -> Deviation {
        let mut worst = 0.0f64;
        for i in indices(3) {
            let (a, b, s) = (i[0], i[1], i[2]);
            let c = self.phi3.value(&[a, b, s]) + self.phi3.value(&[b, s, a]) + self.phi3.value(&[s, a, b]);
            worst = worst.max(c.abs());
        }
        Deviation::new(worst, self.phi3.max_abs_value())
    }

    /// `ε^{καβσ} Φ_{αβσ}` with the permutation symbol.
    pub fn levi_civita_contraction(&self) -> Deviation {
        let mut worst = 0.0f64;
        for k in 0..4 {
            let mut acc = Acc::default();
            for i in indices(3) {
                let e = permutation_sign([k, i[0], i[1], i[2]]);
                if e != 0.0 {
                    acc.push(e * self.phi3.value(&i));
                }
            }
            worst = worst.max(acc.sum.abs());
        }
        Deviation::new(worst, self.phi3.max_abs_value())
    }

    /// `∇_α Φ^β_β − Φ_{αβ}{}^β`: the left side differentiates the trace
    /// jet, the right side contracts the rank-3 values.
    pub fn trace_property(&self, frame: &LocalFrame) -> Result<Deviation> {
        if self.phi2.order() == 0 {
            return Err(Error::jet_depth(1, 0));
        }
        let order = self.phi2.order();
        let ginv = frame.inverse().truncate(order);
        let mut trace = Jet::zero(order);
        let mut scale = 0.0f64;
        for i in indices(2) {
            let term = *ginv.get(&i) * *self.phi2.get(&i);
            scale = scale.max(term.max_partial());
            trace += term;
        }
        let mut worst = 0.0f64;
        for a in 0..4 {
            let lhs = trace.d(a).value();
            let mut rhs = Acc::default();
            for i in indices(2) {
                rhs.push(frame.ginv(i[0], i[1]) * self.phi3.value(&[a, i[0], i[1]]));
            }
            worst = worst.max((lhs - rhs.sum).abs());
            scale = scale.max(rhs.scale);
        }
        Ok(Deviation::new(worst, scale))
    }

    /// `g^{αβ} Φ_{αβ}` against its largest summand.
    pub fn tracelessness(&self, frame: &LocalFrame) -> Deviation {
        let mut acc = Acc::default();
        for i in indices(2) {
            acc.push(frame.ginv(i[0], i[1]) * self.phi2.value(&i));
        }
        Deviation::new(acc.sum.abs(), acc.scale)
    }

    /// Worst of all structural checks.
    pub fn structural(&self, frame: &LocalFrame) -> Result<Deviation> {
        Ok(self
            .rank2_symmetry()
            .worst(self.rank3_antisymmetry())
            .worst(self.cyclic_identity())
            .worst(self.levi_civita_contraction())
            .worst(self.trace_property(frame)?)
            .worst(self.tracelessness(frame)))
    }
}

fn permutation_sign(p: [usize; 4]) -> f64 {
    let mut sign = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn require(lambda: &TensorJet, needed: u8) -> Result<()> {
    if lambda.upper() != 0 || lambda.lower() != 1 {
        return Err(Error::InvalidParameter {
            name: "lambda".into(),
            reason: "gauge generator must be a covector".into(),
        });
    }
    if lambda.order() < needed {
        return Err(Error::jet_depth(needed, lambda.order()));
    }
    Ok(())
}

struct Tracked(f64);

impl Tracked {
    fn term(&mut self, j: Jet) -> Jet {
        self.0 = self.0.max(j.max_partial());
        j
    }
}

fn contract_inverse(frame: &LocalFrame, order: u8, mut f: impl FnMut(usize, usize) -> Jet, t: &mut Tracked) -> Jet {
    let ginv = frame.inverse();
    let mut acc = Jet::zero(order);
    for b in 0..4 {
        for c in 0..4 {
            let g = ginv.get(&[b, c]).truncate(order);
            if g.max_abs() == 0.0 {
                continue;
            }
            acc += t.term(g * f(b, c));
        }
    }
    acc
}

fn scalar_and_rank2(
    lambda: &TensorJet,
    frame: &LocalFrame,
    t: &mut Tracked,
) -> Result<(TensorJet, TensorJet, TensorJet)> {
    require(lambda, 1)?;
    let d1 = covariant_derivative(lambda, frame)?;
    let order = d1.order();
    let div = contract_inverse(frame, order, |b, c| *d1.get(&[b, c]), t);
    let phi = TensorJet::scalar(div, lambda.point());
    let metric = frame.metric();
    let phi2 = TensorJet::from_fn(0, 2, order, lambda.point(), |i| {
        let (a, b) = (i[0], i[1]);
        let trace_part = t.term(metric.get(&[a, b]).truncate(order) * div).scale(-0.5);
        *d1.get(&[a, b]) + *d1.get(&[b, a]) + trace_part
    });
    Ok((phi, phi2, d1))
}

/// `Φ = ∇^βΛ_β` and `Φ_{αβ} = ∇_αΛ_β + ∇_βΛ_α − ½ g_{αβ} ∇^σΛ_σ`, each one
/// jet level below `Λ`.
pub fn gauge_scalar_and_rank2(lambda: &TensorJet, frame: &LocalFrame) -> Result<(TensorJet, TensorJet)> {
    let (phi, phi2, _) = scalar_and_rank2(lambda, frame, &mut Tracked(0.0))?;
    Ok((phi, phi2))
}

fn vector_from_second_derivatives(d2: &TensorJet, frame: &LocalFrame, t: &mut Tracked) -> TensorJet {
    let order = d2.order();
    TensorJet::from_fn(0, 1, order, d2.point(), |i| {
        let a = i[0];
        contract_inverse(
            frame,
            order,
            |b, c| (d2.get(&[a, b, c]).scale(2.0) - *d2.get(&[b, a, c]) - *d2.get(&[b, c, a])).scale(1.0 / 3.0),
            t,
        )
    })
}

/// `Φ_α = ⅔ ∇_α∇^βΛ_β − ⅓ ∇^β∇_αΛ_β − ⅓ ∇^β∇_βΛ_α`, two jet levels below `Λ`.
pub fn gauge_vector(lambda: &TensorJet, frame: &LocalFrame) -> Result<TensorJet> {
    require(lambda, 2)?;
    let d2 = covariant_derivative(&covariant_derivative(lambda, frame)?, frame)?;
    Ok(vector_from_second_derivatives(&d2, frame, &mut Tracked(0.0)))
}

/// `Φ_α = ½ ∇_αΦ − ⅓ ∇^ρΦ_{αρ}` for arbitrary `(Φ, Φ_{αβ})`.
pub fn vector_from_defining_equation(phi: &TensorJet, phi2: &TensorJet, frame: &LocalFrame) -> Result<TensorJet> {
    let dphi = covariant_derivative(phi, frame)?;
    let dphi2 = covariant_derivative(phi2, frame)?;
    let order = dphi2.order();
    let mut t = Tracked(0.0);
    Ok(TensorJet::from_fn(0, 1, order, phi.point(), |i| {
        let a = i[0];
        let div = contract_inverse(frame, order, |r, s| *dphi2.get(&[s, a, r]), &mut t);
        dphi.get(&[a]).scale(0.5) - div.scale(1.0 / 3.0)
    }))
}

fn rank3_from_rank2(phi2: &TensorJet, frame: &LocalFrame, t: &mut Tracked) -> Result<TensorJet> {
    let dphi2 = covariant_derivative(phi2, frame)?;
    let order = dphi2.order();
    let div: Vec<Jet> = (0..4)
        .map(|a| contract_inverse(frame, order, |r, s| *dphi2.get(&[s, a, r]), t))
        .collect();
    let metric = frame.metric();
    Ok(TensorJet::from_fn(0, 3, order, phi2.point(), |i| {
        let (a, b, s) = (i[0], i[1], i[2]);
        let gb = t.term(metric.get(&[b, s]).truncate(order) * div[a]);
        let ga = t.term(metric.get(&[a, s]).truncate(order) * div[b]);
        *dphi2.get(&[a, b, s]) - *dphi2.get(&[b, a, s]) + (gb - ga).scale(1.0 / 3.0)
    }))
}

/// `Φ_{αβσ} = ∇_αΦ_{βσ} − ∇_βΦ_{ασ} + ⅓(g_{βσ}∇^ρΦ_{αρ} − g_{ασ}∇^ρΦ_{βρ})`
/// for a given rank-2 field.
pub fn gauge_rank3(phi2: &TensorJet, frame: &LocalFrame) -> Result<TensorJet> {
    rank3_from_rank2(phi2, frame, &mut Tracked(0.0))
}

/// The gauge multiplet generated by `Λ` (order 3): `Φ`, `Φ_{αβ}` of order
/// 2, `Φ_α` and `Φ_{αβσ}` of order 1.
pub fn assemble_gauge_multiplet(lambda: &TensorJet, frame: &LocalFrame) -> Result<Spin2Multiplet> {
    require(lambda, 3)?;
    let mut t = Tracked(0.0);
    let (phi, phi2, d1) = scalar_and_rank2(lambda, frame, &mut t)?;
    let d2 = covariant_derivative(&d1, frame)?;
    let phi1 = vector_from_second_derivatives(&d2, frame, &mut t);
    let phi3 = rank3_from_rank2(&phi2, frame, &mut t)?;
    let scale = [lambda, &d1, &d2].iter().fold(t.0, |m, x| m.max(x.max_partial()));
    Ok(Spin2Multiplet {
        phi,
        phi1,
        phi2,
        phi3,
        scale,
    })
}

/// Rank of the constraints on an `(αβ)`-antisymmetric rank-3 tensor: the
/// four cyclic conditions alone, then together with the four traces taken
/// with `metric`. Returns the dimension left free in each case.
pub fn rank3_free_dimensions(metric_inverse: &[[f64; 4]; 4]) -> (usize, usize) {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    let n = pairs.len() * 4;
    // column j holds the basis tensor e_{[ab]c}
    let basis = |col: usize, idx: [usize; 3]| -> f64 {
        let (a, b) = pairs[col / 4];
        let c = col % 4;
        if idx[2] != c {
            0.0
        } else if (idx[0], idx[1]) == (a, b) {
            1.0
        } else if (idx[0], idx[1]) == (b, a) {
            -1.0
        } else {
            0.0
        }
    };
    let cyclic = DMatrix::from_fn(4, n, |k, col| {
        indices(3)
            .map(|i| permutation_sign([k, i[0], i[1], i[2]]) * basis(col, [i[0], i[1], i[2]]))
            .sum()
    });
    let trace = DMatrix::from_fn(4, n, |a, col| {
        indices(2)
            .map(|i| metric_inverse[i[0]][i[1]] * basis(col, [a, i[0], i[1]]))
            .sum()
    });
    let mut both = DMatrix::<f64>::zeros(8, n);
    both.rows_mut(0, 4).copy_from(&cyclic);
    both.rows_mut(4, 4).copy_from(&trace);
    let tol = 1e-10;
    (n - cyclic.rank(tol), n - both.rank(tol))
}
