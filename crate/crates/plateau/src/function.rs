//! Scalar functions on the cells of a complex.

use crate::complex::CellId;

/// A real value per cell. Virtual capping cells carry `+inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct CellFunction {
    values: Vec<f64>,
}

impl CellFunction {
    pub fn new(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| !v.is_nan()));
        CellFunction { values }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        CellFunction {
            values: vec![value; n],
        }
    }

    #[inline]
    pub fn value(&self, c: CellId) -> f64 {
        self.values[c.index()]
    }

    #[inline]
    pub fn set(&mut self, c: CellId, value: f64) {
        self.values[c.index()] = value;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Sup-norm distance; two equal infinite values contribute zero.
    pub fn sup_distance(&self, other: &CellFunction) -> f64 {
        assert_eq!(self.len(), other.len());
        let mut best = 0.0f64;
        for (a, b) in self.values.iter().zip(&other.values) {
            if a == b {
                continue;
            }
            best = best.max((a - b).abs());
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_distance_ignores_matching_infinities() {
        let a = CellFunction::new(vec![0.0, f64::INFINITY, 2.0]);
        let b = CellFunction::new(vec![0.5, f64::INFINITY, 2.0]);
        assert_eq!(a.sup_distance(&b), 0.5);
    }
}
