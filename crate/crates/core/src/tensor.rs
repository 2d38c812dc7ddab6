//! Tensors whose components are jets.
//!
//! Index layout: the `upper` contravariant slots come first, followed by the
//! `lower` covariant slots; components are stored row-major with every
//! index running over `0..4`.

use crate::jet::{Jet, DIM};

/// Coordinate 4-tuple.
pub type Point = [f64; DIM];

#[derive(Clone, Debug, PartialEq)]
pub struct TensorJet {
    upper: usize,
    lower: usize,
    order: u8,
    point: Point,
    comps: Vec<Jet>,
}

/// Iterator over all index tuples of a given rank, in storage order.
pub fn indices(rank: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..DIM.pow(rank as u32)).map(move |flat| unflatten(flat, rank))
}

fn unflatten(mut flat: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for slot in (0..rank).rev() {
        idx[slot] = flat % DIM;
        flat /= DIM;
    }
    idx
}

fn flatten(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| {
        debug_assert!(i < DIM);
        acc * DIM + i
    })
}

impl TensorJet {
    pub fn zeros(upper: usize, lower: usize, order: u8, point: Point) -> Self {
        TensorJet {
            upper,
            lower,
            order,
            point,
            comps: vec![Jet::zero(order); DIM.pow((upper + lower) as u32)],
        }
    }

    /// Builds a tensor from a component function. Every component is
    /// truncated to `order`.
    pub fn from_fn(upper: usize, lower: usize, order: u8, point: Point, mut f: impl FnMut(&[usize]) -> Jet) -> Self {
        let rank = upper + lower;
        let comps = indices(rank)
            .map(|idx| {
                let j = f(&idx);
                debug_assert!(j.order() >= order, "component order below tensor order");
                j.truncate(order)
            })
            .collect();
        TensorJet {
            upper,
            lower,
            order,
            point,
            comps,
        }
    }

    /// Scalar tensor from a single jet.
    pub fn scalar(value: Jet, point: Point) -> Self {
        TensorJet {
            upper: 0,
            lower: 0,
            order: value.order(),
            point,
            comps: vec![value],
        }
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn rank(&self) -> usize {
        self.upper + self.lower
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn point(&self) -> Point {
        self.point
    }

    pub fn components(&self) -> &[Jet] {
        &self.comps
    }

    pub fn get(&self, idx: &[usize]) -> &Jet {
        debug_assert_eq!(idx.len(), self.rank());
        &self.comps[flatten(idx)]
    }

    pub fn get_mut(&mut self, idx: &[usize]) -> &mut Jet {
        debug_assert_eq!(idx.len(), self.rank());
        &mut self.comps[flatten(idx)]
    }

    /// Component value at the base point.
    pub fn value(&self, idx: &[usize]) -> f64 {
        self.get(idx).value()
    }

    /// All component values in storage order.
    pub fn values(&self) -> Vec<f64> {
        self.comps.iter().map(Jet::value).collect()
    }

    pub fn truncate(&self, order: u8) -> TensorJet {
        let order = order.min(self.order);
        TensorJet {
            order,
            comps: self.comps.iter().map(|c| c.truncate(order)).collect(),
            ..self.clone()
        }
    }

    /// Largest |coefficient| over every component and every stored level.
    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    /// Largest |partial derivative| over every component and level.
    pub fn max_partial(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_partial()))
    }

    /// Largest |component value| at the base point.
    pub fn max_abs_value(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.value().abs()))
    }

    pub fn scale(&self, factor: f64) -> TensorJet {
        TensorJet {
            comps: self.comps.iter().map(|c| c.scale(factor)).collect(),
            ..self.clone()
        }
    }

    /// Componentwise `self - other` (same valence required).
    pub fn sub(&self, other: &TensorJet) -> TensorJet {
        assert_eq!((self.upper, self.lower), (other.upper, other.lower));
        let order = self.order.min(other.order);
        TensorJet {
            order,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| *a - *b).collect(),
            ..self.clone()
        }
    }

    /// Componentwise `self + other` (same valence required).
    pub fn add(&self, other: &TensorJet) -> TensorJet {
        self.sub(&other.scale(-1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_round_trip() {
        for (flat, idx) in indices(3).enumerate() {
            assert_eq!(flatten(&idx), flat);
        }
        assert_eq!(indices(0).count(), 1);
        assert_eq!(indices(4).count(), 256);
    }

    #[test]
    fn from_fn_and_access() {
        let p = [0.0, 1.0, 2.0, 3.0];
        let t = TensorJet::from_fn(1, 1, 1, p, |i| Jet::constant((10 * i[0] + i[1]) as f64, 2));
        assert_eq!(t.order(), 1);
        assert_eq!(t.value(&[2, 3]), 23.0);
        assert_eq!(t.rank(), 2);
        assert_eq!(t.max_abs_value(), 33.0);
        let d = t.sub(&t.scale(0.5));
        assert_eq!(d.value(&[3, 1]), 15.5);
    }
}
