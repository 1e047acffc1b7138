//! Antibody concentrations: the difference-equation update, normalization
//! to a fixed clone total, activation and penalty rollback.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Per-antibody clone proportions. After [`normalized`](Self::normalized)
/// the values are non-negative and sum to `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConcentrationVector<F> {
    values: Vec<F>,
}

impl<F: Scalar> ConcentrationVector<F> {
    /// Every antibody at concentration 1.
    pub fn uniform(antibodies: usize) -> Self {
        Self {
            values: vec![F::one(); antibodies],
        }
    }

    pub fn from_values(values: Vec<F>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, antibody: usize) -> F {
        self.values[antibody]
    }

    pub fn sum(&self) -> F {
        self.values.iter().copied().sum()
    }

    /// `C' = C + b*Tg - k2*C`, floored at zero.
    pub fn update(&self, tg: &[F], b: F, k2: F) -> Self {
        debug_assert_eq!(tg.len(), self.values.len());
        let values = self
            .values
            .iter()
            .zip(tg)
            .map(|(&c, &g)| (c + b * g - k2 * c).max(F::zero()))
            .collect();
        Self { values }
    }

    /// Rescales so the values sum to `N`. A zero total resets every
    /// antibody to 1.
    pub fn normalized(&self) -> Self {
        let n = F::from_usize(self.values.len()).expect("antibody count");
        let total = self.sum();
        if !(total > F::zero()) {
            return Self::uniform(self.values.len());
        }
        Self {
            values: self.values.iter().map(|&c| n * c / total).collect(),
        }
    }

    /// `A = C * Tg`.
    pub fn activation(&self, tg: &[F]) -> Vec<F> {
        self.values.iter().zip(tg).map(|(&c, &g)| c * g).collect()
    }

    /// Restores `penalized` to its value in `previous`, keeps the others
    /// from `self`, and re-normalizes.
    pub fn rollback(&self, previous: &Self, penalized: usize) -> Self {
        let mut values = self.values.clone();
        values[penalized] = previous.values[penalized];
        Self { values }.normalized()
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn update_arithmetic() {
        let c = ConcentrationVector::<f64>::uniform(1);
        assert_abs_diff_eq!(c.update(&[0.01], 80.0, 0.05).get(0), 1.75, epsilon = 1e-12);
        assert_eq!(c.update(&[0.0], 80.0, 0.0).get(0), 1.0);
        assert_eq!(c.update(&[-0.02], 80.0, 0.05).get(0), 0.0);
    }

    #[test]
    fn normalization() {
        let c = ConcentrationVector::from_values(vec![2.0f64; 16]).normalized();
        assert!(c.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
        let c = ConcentrationVector::from_values(vec![3.0f64, 1.0, 0.0, 0.0]).normalized();
        assert_eq!(c.values(), &[3.0, 1.0, 0.0, 0.0]);
        let c = ConcentrationVector::from_values(vec![1.0f64, 1.0, 2.0]).normalized();
        assert_eq!(c.values(), &[0.75, 0.75, 1.5]);
        let c = ConcentrationVector::from_values(vec![0.0f64; 3]).normalized();
        assert_eq!(c.values(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn activation_is_elementwise() {
        let c = ConcentrationVector::from_values(vec![1.75f64, 3.0]);
        assert_eq!(c.activation(&[1.84375, 0.0]), vec![3.2265625, 0.0]);
    }

    #[test]
    fn rollback_is_unconditional() {
        let prev = ConcentrationVector::from_values(vec![1.0f64, 1.0]);
        let up = ConcentrationVector::from_values(vec![1.75f64, 0.25]);
        // 1.0 restored, then re-normalized against 0.25
        let r = up.rollback(&prev, 0);
        assert_abs_diff_eq!(r.get(0), 2.0 * 1.0 / 1.25, epsilon = 1e-12);
        let down = ConcentrationVector::from_values(vec![0.6f64, 1.4]);
        let r = down.rollback(&prev, 0);
        assert_abs_diff_eq!(r.get(0), 2.0 * 1.0 / 2.4, epsilon = 1e-12);
        assert_abs_diff_eq!(r.sum(), 2.0, epsilon = 1e-12);
    }
}
