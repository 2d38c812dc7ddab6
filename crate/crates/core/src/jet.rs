//! Truncated multivariate Taylor series ("jets") in the four spacetime
//! coordinates.
//!
//! A [`Jet`] of order `k` stores the Taylor coefficients of a scalar
//! function about a base point for every monomial of total degree `≤ k`,
//! with `k ≤ 3`. Partial derivatives are recovered as `α! · c_α`, so the
//! derivative slots are symmetric in their indices by construction.
//! Arithmetic is the truncated Cauchy product: a product of jets of orders
//! `a` and `b` is exact through order `min(a, b)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

/// Number of coordinates.
pub const DIM: usize = 4;
/// Deepest derivative level a jet can carry.
pub const MAX_ORDER: u8 = 3;
/// Number of monomials of degree `≤ MAX_ORDER` in `DIM` variables.
pub const NUM_COEFFS: usize = 35;

// Monomials are stored grouped by degree; `OFFSETS[d]` is the first slot of
// degree `d`, so a jet of order `k` uses slots `0..OFFSETS[k + 1]`.
const OFFSETS: [usize; MAX_ORDER as usize + 2] = [0, 1, 5, 15, 35];

struct Tables {
    exponents: [[u8; DIM]; NUM_COEFFS],
    factorials: [f64; NUM_COEFFS],
    // (i, j, k): monomial_i * monomial_j = monomial_k, sorted by degree of k.
    products: Vec<(u8, u8, u8)>,
    products_upto: [usize; MAX_ORDER as usize + 1],
    // raise[mu][k] = slot of monomial_k * x_mu (None past MAX_ORDER).
    raise: [[Option<u8>; NUM_COEFFS]; DIM],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(build_tables)
}

fn build_tables() -> Tables {
    let mut exponents = Vec::with_capacity(NUM_COEFFS);
    for degree in 0..=MAX_ORDER {
        for a in (0..=degree).rev() {
            for b in (0..=degree - a).rev() {
                for c in (0..=degree - a - b).rev() {
                    exponents.push([a, b, c, degree - a - b - c]);
                }
            }
        }
    }
    assert_eq!(exponents.len(), NUM_COEFFS);
    let slot_of = |e: [u8; DIM]| exponents.iter().position(|x| *x == e);

    let mut factorials = [1.0; NUM_COEFFS];
    for (slot, e) in exponents.iter().enumerate() {
        factorials[slot] = e.iter().map(|&n| (1..=n as u32).product::<u32>() as f64).product();
    }

    let mut products = Vec::new();
    for (i, ei) in exponents.iter().enumerate() {
        for (j, ej) in exponents.iter().enumerate() {
            let sum: [u8; DIM] = std::array::from_fn(|m| ei[m] + ej[m]);
            if let Some(k) = slot_of(sum) {
                products.push((i as u8, j as u8, k as u8));
            }
        }
    }
    products.sort_by_key(|&(_, _, k)| k);
    let mut products_upto = [0; MAX_ORDER as usize + 1];
    for (order, upto) in products_upto.iter_mut().enumerate() {
        *upto = products
            .iter()
            .take_while(|&&(_, _, k)| (k as usize) < OFFSETS[order + 1])
            .count();
    }

    let mut raise = [[None; NUM_COEFFS]; DIM];
    for (mu, row) in raise.iter_mut().enumerate() {
        for (slot, e) in exponents.iter().enumerate() {
            let mut up = *e;
            up[mu] += 1;
            row[slot] = slot_of(up).map(|s| s as u8);
        }
    }

    Tables {
        exponents: exponents.try_into().unwrap(),
        factorials,
        products,
        products_upto,
        raise,
    }
}

/// Slot index of the monomial with the given exponents, if it is stored.
pub fn monomial_slot(exponents: [u8; DIM]) -> Option<usize> {
    tables().exponents.iter().position(|e| *e == exponents)
}

/// Exponent vector of a stored monomial.
pub fn monomial_exponents(slot: usize) -> [u8; DIM] {
    tables().exponents[slot]
}

/// Number of stored coefficients for a jet of the given order.
pub fn coeff_count(order: u8) -> usize {
    OFFSETS[order as usize + 1]
}

/// Converts a list of derivative directions (e.g. `[1, 1, 3]` for
/// `∂_1 ∂_1 ∂_3`) to an exponent vector.
pub fn exponents_of(directions: &[usize]) -> [u8; DIM] {
    let mut e = [0u8; DIM];
    for &d in directions {
        e[d] += 1;
    }
    e
}

#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    order: u8,
    coeffs: [f64; NUM_COEFFS],
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("order", &self.order)
            .field("coeffs", &&self.coeffs[..coeff_count(self.order)])
            .finish()
    }
}

impl Jet {
    pub fn zero(order: u8) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Jet {
            order,
            coeffs: [0.0; NUM_COEFFS],
        }
    }

    pub fn constant(value: f64, order: u8) -> Self {
        let mut j = Jet::zero(order);
        j.coeffs[0] = value;
        j
    }

    /// The coordinate function `x^mu` expanded about `base`.
    pub fn variable(mu: usize, base: f64, order: u8) -> Self {
        let mut j = Jet::constant(base, order);
        if order >= 1 {
            j.coeffs[1 + mu] = 1.0;
        }
        j
    }

    /// A function of the single coordinate `x^mu`, given its derivatives
    /// `f, f', f'', f'''` at the base point (extra entries are ignored).
    pub fn univariate(mu: usize, derivs: &[f64], order: u8) -> Self {
        let mut j = Jet::zero(order);
        let mut factorial = 1.0;
        for (k, &d) in derivs.iter().enumerate().take(order as usize + 1) {
            if k > 0 {
                factorial *= k as f64;
            }
            let mut e = [0u8; DIM];
            e[mu] = k as u8;
            j.coeffs[monomial_slot(e).unwrap()] = d / factorial;
        }
        j
    }

    /// Builds a jet from partial derivatives: `partial(e)` must return
    /// `∂^e f` at the base point for the exponent vector `e`.
    pub fn from_partials(order: u8, mut partial: impl FnMut([u8; DIM]) -> f64) -> Self {
        let t = tables();
        let mut j = Jet::zero(order);
        for slot in 0..coeff_count(order) {
            j.coeffs[slot] = partial(t.exponents[slot]) / t.factorials[slot];
        }
        j
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..coeff_count(self.order)]
    }

    /// Partial derivative at the base point along the given directions.
    /// Returns `None` when the requested level is not stored.
    pub fn partial(&self, directions: &[usize]) -> Option<f64> {
        if directions.len() > self.order as usize {
            return None;
        }
        let slot = monomial_slot(exponents_of(directions))?;
        Some(self.coeffs[slot] * tables().factorials[slot])
    }

    /// `∂_mu` of the series; the result has order one less.
    ///
    /// # Panics
    /// If the jet has order 0.
    pub fn d(&self, mu: usize) -> Jet {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let t = tables();
        let mut out = Jet::zero(self.order - 1);
        for slot in 0..coeff_count(out.order) {
            let up = t.raise[mu][slot].expect("raised monomial within order") as usize;
            out.coeffs[slot] = f64::from(t.exponents[slot][mu] + 1) * self.coeffs[up];
        }
        out
    }

    pub fn truncate(&self, order: u8) -> Jet {
        if order >= self.order {
            return *self;
        }
        let mut out = Jet::zero(order);
        let n = coeff_count(order);
        out.coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        out
    }

    pub fn scale(&self, factor: f64) -> Jet {
        let mut out = *self;
        for c in out.coeffs[..coeff_count(self.order)].iter_mut() {
            *c *= factor;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest |partial derivative| over every stored level.
    pub fn max_partial(&self) -> f64 {
        let f = &tables().factorials;
        self.coeffs().iter().zip(f).fold(0.0, |m, (c, k)| m.max((c * k).abs()))
    }

    /// `f ∘ self` for a univariate `f` whose derivatives at `self.value()`
    /// are `f, f', f'', f'''`.
    pub fn compose(&self, derivs: &[f64; 4]) -> Jet {
        let mut delta = *self;
        delta.coeffs[0] = 0.0;
        let mut out = Jet::constant(derivs[0], self.order);
        let mut power = Jet::constant(1.0, self.order);
        let mut factorial = 1.0;
        for (k, &dk) in derivs.iter().enumerate().skip(1).take(self.order as usize) {
            power *= delta;
            factorial *= k as f64;
            out += power.scale(dk / factorial);
        }
        out
    }

    pub fn recip(&self) -> Jet {
        let v = self.value();
        self.compose(&[1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v)])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose(&[s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose(&[c, -s, -c, s])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&[e, e, e, e])
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut out = Jet::constant(1.0, self.order);
        for _ in 0..n {
            out *= *self;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::zero(order);
        for slot in 0..coeff_count(order) {
            out.coeffs[slot] = self.coeffs[slot] + rhs.coeffs[slot];
        }
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::zero(order);
        for slot in 0..coeff_count(order) {
            out.coeffs[slot] = self.coeffs[slot] - rhs.coeffs[slot];
        }
        out
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let t = tables();
        let order = self.order.min(rhs.order);
        let mut out = Jet::zero(order);
        for &(i, j, k) in &t.products[..t.products_upto[order as usize]] {
            out.coeffs[k as usize] += self.coeffs[i as usize] * rhs.coeffs[j as usize];
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, rhs: Jet) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn poly_jet(base: [f64; 4]) -> Jet {
        // f = x0^2 x1 + 3 x2 x3 - x3^3
        let x: Vec<Jet> = (0..4).map(|m| Jet::variable(m, base[m], 3)).collect();
        x[0] * x[0] * x[1] + 3.0 * (x[2] * x[3]) - x[3].powi(3)
    }

    #[test]
    fn table_shape() {
        assert_eq!(coeff_count(0), 1);
        assert_eq!(coeff_count(1), 5);
        assert_eq!(coeff_count(2), 15);
        assert_eq!(coeff_count(3), 35);
        for slot in 0..NUM_COEFFS {
            let e = monomial_exponents(slot);
            let deg: u8 = e.iter().sum();
            assert!(slot >= OFFSETS[deg as usize] && slot < OFFSETS[deg as usize + 1]);
        }
    }

    #[test]
    fn polynomial_partials_are_exact() {
        let b = [1.5, -0.5, 2.0, 0.25];
        let f = poly_jet(b);
        let value = b[0] * b[0] * b[1] + 3.0 * b[2] * b[3] - b[3].powi(3);
        assert_relative_eq!(f.value(), value, epsilon = 1e-14);
        assert_relative_eq!(f.partial(&[0]).unwrap(), 2.0 * b[0] * b[1], epsilon = 1e-14);
        assert_relative_eq!(f.partial(&[0, 1]).unwrap(), 2.0 * b[0], epsilon = 1e-14);
        assert_relative_eq!(f.partial(&[1, 0, 0]).unwrap(), 2.0, epsilon = 1e-14);
        assert_relative_eq!(f.partial(&[3, 3, 3]).unwrap(), -6.0, epsilon = 1e-14);
        assert_relative_eq!(f.partial(&[2, 3]).unwrap(), 3.0, epsilon = 1e-14);
        assert_eq!(f.partial(&[0, 0, 0, 0]), None);
    }

    #[test]
    fn derivative_lowers_order() {
        let f = poly_jet([0.3, 0.1, -0.2, 0.7]);
        let df = f.d(0);
        assert_eq!(df.order(), 2);
        assert_relative_eq!(df.partial(&[0, 1]).unwrap(), f.partial(&[0, 0, 1]).unwrap());
        assert_eq!(df.d(1).d(2).order(), 0);
    }

    #[test]
    #[should_panic]
    fn order_zero_cannot_differentiate() {
        Jet::constant(1.0, 0).d(0);
    }

    #[test]
    fn transcendental_composition() {
        // sin(2 x0 - x1) at base (0.4, 0.3)
        let u = 2.0 * Jet::variable(0, 0.4, 3) - Jet::variable(1, 0.3, 3);
        let s = u.sin();
        let u0: f64 = 0.5;
        assert_relative_eq!(s.value(), u0.sin(), epsilon = 1e-15);
        assert_relative_eq!(s.partial(&[0]).unwrap(), 2.0 * u0.cos(), epsilon = 1e-15);
        assert_relative_eq!(s.partial(&[0, 1]).unwrap(), 2.0 * u0.sin(), epsilon = 1e-15);
        assert_relative_eq!(s.partial(&[0, 0, 1]).unwrap(), 4.0 * u0.cos(), epsilon = 1e-14);
        let r = Jet::variable(1, 4.0, 3).recip();
        assert_relative_eq!(r.partial(&[1, 1, 1]).unwrap(), -6.0 / 256.0, epsilon = 1e-15);
        let e = Jet::variable(0, 0.2, 3).scale(2.0).exp();
        assert_relative_eq!(e.partial(&[0, 0, 0]).unwrap(), 8.0 * 0.4f64.exp(), epsilon = 1e-14);
    }

    #[test]
    fn from_partials_round_trip() {
        let f = poly_jet([0.9, -1.1, 0.4, 0.6]);
        let g = Jet::from_partials(3, |e| {
            let dirs: Vec<usize> = (0..4).flat_map(|m| std::iter::repeat_n(m, e[m] as usize)).collect();
            f.partial(&dirs).unwrap()
        });
        for (a, b) in f.coeffs().iter().zip(g.coeffs()) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    proptest! {
        #[test]
        fn product_rule_holds(a in proptest::array::uniform4(-2.0f64..2.0),
                              mu in 0usize..4, nu in 0usize..4) {
            let f = poly_jet(a);
            let g = (Jet::variable(1, a[1], 3) * Jet::variable(2, a[2], 3)).sin();
            let lhs = (f * g).d(mu);
            let rhs = f.d(mu) * g.truncate(2) + f.truncate(2) * g.d(mu);
            for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
            // mixed partials commute
            let p = f * g;
            let m1 = p.d(mu).d(nu).value();
            let m2 = p.d(nu).d(mu).value();
            prop_assert!((m1 - m2).abs() <= 1e-12 * (1.0 + m1.abs()));
        }
    }
}
