use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::jet::{Jet, DIM};
use crate::tensor::{Point, TensorJet};

/// Highest total degree a generated polynomial may have.
pub const MAX_DEGREE: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorFamily {
    Polynomial,
    PolynomialTrig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: [u8; DIM],
    pub coeff: f64,
}

/// Multivariate polynomial in the chart coordinates.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(terms: Vec<Monomial>) -> Self {
        Polynomial { terms }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![Monomial {
            exponents: [0; DIM],
            coeff: c,
        }])
    }

    pub fn term(coeff: f64, exponents: [u8; DIM]) -> Self {
        Polynomial::new(vec![Monomial { exponents, coeff }])
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exponents.iter().map(|&e| u32::from(e)).sum())
            .max()
            .unwrap_or(0)
    }

    /// Exact Taylor jet about `point`.
    pub fn jet(&self, point: &Point, order: u8) -> Jet {
        let max_exp = self.terms.iter().flat_map(|t| t.exponents).max().unwrap_or(0) as usize;
        // powers[m][k] = (x^m)^k as a jet
        let powers: Vec<Vec<Jet>> = (0..DIM)
            .map(|m| {
                let x = Jet::variable(m, point[m], order);
                let mut p = vec![Jet::constant(1.0, order)];
                for k in 1..=max_exp {
                    p.push(p[k - 1] * x);
                }
                p
            })
            .collect();
        self.terms.iter().fold(Jet::zero(order), |acc, t| {
            let mono = (0..DIM).fold(Jet::constant(t.coeff, order), |m, mu| {
                m * powers[mu][t.exponents[mu] as usize]
            });
            acc + mono
        })
    }

    fn random(rng: &mut ChaCha8Rng, degree: u32) -> Self {
        let mut terms = Vec::new();
        for d in 0..=degree as u8 {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    for c in (0..=d - a - b).rev() {
                        terms.push(Monomial {
                            exponents: [a, b, c, d - a - b - c],
                            coeff: rng.gen_range(-1.0..=1.0),
                        });
                    }
                }
            }
        }
        Polynomial { terms }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigKind {
    Sin,
    Cos,
}

/// `sin(k·x + φ)` or `cos(k·x + φ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigFactor {
    pub kind: TrigKind,
    pub wave: [f64; DIM],
    pub phase: f64,
}

impl TrigFactor {
    fn jet(&self, point: &Point, order: u8) -> Jet {
        let arg = (0..DIM).fold(Jet::constant(self.phase, order), |acc, m| {
            acc + Jet::variable(m, point[m], order).scale(self.wave[m])
        });
        match self.kind {
            TrigKind::Sin => arg.sin(),
            TrigKind::Cos => arg.cos(),
        }
    }
}

/// The gauge covector field `Λ_α(x)`: one polynomial per component, optionally
/// multiplied by a common trigonometric factor. Derivatives of every order
/// are exact because the family is closed under differentiation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeGenerator {
    pub components: [Polynomial; DIM],
    pub trig: Option<TrigFactor>,
}

impl GaugeGenerator {
    pub fn polynomial(components: [Polynomial; DIM]) -> Self {
        GaugeGenerator { components, trig: None }
    }

    pub fn zero() -> Self {
        GaugeGenerator::polynomial(Default::default())
    }

    /// Coefficients uniform in `[−1, 1]` for every monomial of degree
    /// `≤ degree`; with [`GeneratorFamily::PolynomialTrig`] a random
    /// `sin`/`cos` of a linear form multiplies every component.
    pub fn random(seed: u64, degree: u32, family: GeneratorFamily) -> Self {
        let degree = degree.min(MAX_DEGREE);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let components = std::array::from_fn(|_| Polynomial::random(&mut rng, degree));
        let trig = match family {
            GeneratorFamily::Polynomial => None,
            GeneratorFamily::PolynomialTrig => Some(TrigFactor {
                kind: if rng.gen_bool(0.5) {
                    TrigKind::Sin
                } else {
                    TrigKind::Cos
                },
                wave: std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)),
                phase: rng.gen_range(0.0..std::f64::consts::TAU),
            }),
        };
        GaugeGenerator { components, trig }
    }

    pub fn family(&self) -> GeneratorFamily {
        if self.trig.is_some() {
            GeneratorFamily::PolynomialTrig
        } else {
            GeneratorFamily::Polynomial
        }
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// `Λ_α` with exact partials through order `k`, as a covector jet.
    pub fn partials(&self, point: &Point, k: u8) -> TensorJet {
        let trig = self.trig.as_ref().map(|t| t.jet(point, k));
        TensorJet::from_fn(0, 1, k, *point, |i| {
            let p = self.components[i[0]].jet(point, k);
            match trig {
                Some(t) => p * t,
                None => p,
            }
        })
    }

    pub fn value(&self, point: &Point) -> [f64; DIM] {
        let j = self.partials(point, 0);
        std::array::from_fn(|a| j.value(&[a]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = GaugeGenerator::random(7, 4, GeneratorFamily::PolynomialTrig);
        let b = GaugeGenerator::random(7, 4, GeneratorFamily::PolynomialTrig);
        let c = GaugeGenerator::random(8, 4, GeneratorFamily::PolynomialTrig);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.degree(), 4);
        // 70 monomials of degree <= 4 in four variables
        assert_eq!(a.components[0].terms.len(), 70);
        assert!(a.components.iter().flat_map(|p| &p.terms).all(|t| t.coeff.abs() <= 1.0));
    }

    #[test]
    fn exact_partials_agree_with_finite_differences() {
        let gen = GaugeGenerator::random(3, 4, GeneratorFamily::PolynomialTrig);
        let p = [0.3, -0.2, 0.5, 0.1];
        let jet = gen.partials(&p, 3);
        let h = 1e-3;
        for mu in 0..4 {
            let shift = |s: f64| {
                let mut q = p;
                q[mu] += s;
                gen.value(&q)
            };
            let (fp, fm, fp2, fm2) = (shift(h), shift(-h), shift(2.0 * h), shift(-2.0 * h));
            for a in 0..4 {
                let fd = (8.0 * (fp[a] - fm[a]) - (fp2[a] - fm2[a])) / (12.0 * h);
                let exact = jet.get(&[a]).partial(&[mu]).unwrap();
                assert!((fd - exact).abs() < 1e-9 * (1.0 + exact.abs()), "{fd} vs {exact}");
            }
        }
    }

    #[test]
    fn partials_are_symmetric() {
        let gen = GaugeGenerator::random(11, 4, GeneratorFamily::PolynomialTrig);
        let jet = gen.partials(&[1.0, 2.0, -1.0, 0.5], 3);
        for a in 0..4 {
            let c = jet.get(&[a]);
            assert_eq!(c.d(0).d(1).d(2).value(), c.d(2).d(0).d(1).value());
        }
    }

    #[test]
    fn hand_built_linear_generator() {
        // Λ_0 = x^1
        let gen = GaugeGenerator::polynomial([
            Polynomial::term(1.0, [0, 1, 0, 0]),
            Polynomial::default(),
            Polynomial::default(),
            Polynomial::default(),
        ]);
        let jet = gen.partials(&[0.0, 2.0, 0.0, 0.0], 3);
        assert_relative_eq!(jet.value(&[0]), 2.0);
        assert_relative_eq!(jet.get(&[0]).partial(&[1]).unwrap(), 1.0);
        assert_eq!(jet.get(&[0]).partial(&[1, 1]).unwrap(), 0.0);
        assert_eq!(gen.family(), GeneratorFamily::Polynomial);
    }
}
