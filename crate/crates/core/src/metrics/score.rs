use serde::Serialize;

use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Score<T: Real = f64> {
    pub recall: T,
    pub precision: T,
    pub f1: T,
}

impl<T: Real> Score<T> {
    pub fn new(recall: T, precision: T, f1: T) -> Self {
        Score {
            recall,
            precision,
            f1,
        }
    }

    pub fn zero() -> Self {
        Score::new(T::zero(), T::zero(), T::zero())
    }

    /// Harmonic mean, 0 when both are 0.
    pub fn from_recall_precision(recall: T, precision: T) -> Self {
        let s = recall + precision;
        let f1 = if s > T::zero() {
            T::of(2.0) * recall * precision / s
        } else {
            T::zero()
        };
        Score::new(recall, precision, f1)
    }

    pub fn cast<U: Real>(&self) -> Score<U> {
        Score::new(
            U::of(self.recall.as_f64()),
            U::of(self.precision.as_f64()),
            U::of(self.f1.as_f64()),
        )
    }
}
