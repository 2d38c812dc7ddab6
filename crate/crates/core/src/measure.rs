//! Cancellation-aware magnitudes.
//!
//! Residuals here are sums of many large terms that cancel, so deviations
//! are measured relative to the largest individual summand seen while the
//! expression was assembled rather than to the (near zero) result.

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
pub type Rank3 = [[[f64; 4]; 4]; 4];

/// Running sum that remembers its largest summand.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Acc {
    pub sum: f64,
    pub scale: f64,
}

impl Acc {
    pub fn push(&mut self, term: f64) {
        self.sum += term;
        self.scale = self.scale.max(term.abs());
    }

    pub fn with(mut self, term: f64) -> Self {
        self.push(term);
        self
    }
}

/// A value together with the largest summand used to build it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summed<T> {
    pub value: T,
    pub scale: f64,
}

impl<T> Summed<T> {
    pub fn new(value: T, scale: f64) -> Self {
        Summed { value, scale }
    }
}

impl Summed<f64> {
    pub fn from_acc(acc: Acc) -> Self {
        Summed::new(acc.sum, acc.scale)
    }
}

impl Summed<Vec4> {
    pub fn from_accs(accs: [Acc; 4]) -> Self {
        let scale = accs.iter().fold(0.0f64, |m, a| m.max(a.scale));
        Summed::new(accs.map(|a| a.sum), scale)
    }
}

impl Summed<Mat4> {
    pub fn from_accs(accs: [[Acc; 4]; 4]) -> Self {
        let scale = accs.iter().flatten().fold(0.0f64, |m, a| m.max(a.scale));
        Summed::new(accs.map(|row| row.map(|a| a.sum)), scale)
    }
}

impl Summed<Rank3> {
    pub fn from_accs(accs: [[[Acc; 4]; 4]; 4]) -> Self {
        let scale = accs.iter().flatten().flatten().fold(0.0f64, |m, a| m.max(a.scale));
        Summed::new(accs.map(|m| m.map(|row| row.map(|a| a.sum))), scale)
    }
}

/// Absolute max-norm difference and the scale it is measured against.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Deviation {
    pub absolute: f64,
    pub scale: f64,
}

impl Deviation {
    pub fn new(absolute: f64, scale: f64) -> Self {
        Deviation { absolute, scale }
    }

    /// `absolute / scale`, or `absolute` when every summand vanished.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.absolute / self.scale
        } else {
            self.absolute
        }
    }

    /// The larger of two deviations by relative size.
    pub fn worst(self, other: Deviation) -> Deviation {
        if other.relative() > self.relative() || other.relative().is_nan() {
            other
        } else {
            self
        }
    }

    /// Compares two flattened component lists.
    pub fn between(a: &[f64], b: &[f64], scale: f64) -> Deviation {
        debug_assert_eq!(a.len(), b.len());
        let mut absolute = 0.0f64;
        for (x, y) in a.iter().zip(b) {
            let d = (x - y).abs();
            if d.is_nan() {
                return Deviation::new(f64::NAN, scale);
            }
            absolute = absolute.max(d);
        }
        Deviation::new(absolute, scale)
    }
}

pub fn flat4(m: &Mat4) -> Vec<f64> {
    m.iter().flatten().copied().collect()
}

pub fn flat_rank3(t: &Rank3) -> Vec<f64> {
    t.iter().flatten().flatten().copied().collect()
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}
