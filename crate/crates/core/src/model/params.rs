use std::collections::BTreeMap;

use crate::mentions::ResolutionMode;
use crate::num::Real;
use crate::representation::{conditioning_count, outcome_count, BucketScheme};

pub const DEFAULT_EPSILON: f64 = 1e-10;

/// `t(outcome | conditioning)` for one mode.
///
/// Rows are stored densely but only for conditioning keys that have been
/// set explicitly; every other row is uniform over the outcome space. A
/// freshly initialized table has no explicit rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable<T: Real = f64> {
    mode: ResolutionMode,
    rows: BTreeMap<u16, Vec<T>>,
}

impl<T: Real> ModeTable<T> {
    pub fn uniform(mode: ResolutionMode) -> Self {
        ModeTable {
            mode,
            rows: BTreeMap::new(),
        }
    }

    pub fn mode(&self) -> ResolutionMode {
        self.mode
    }

    pub fn outcome_count(&self) -> usize {
        outcome_count(self.mode)
    }

    pub fn get(&self, conditioning: usize, outcome: usize) -> T {
        match self.rows.get(&(conditioning as u16)) {
            Some(row) => row[outcome],
            None => T::one() / T::of_usize(self.outcome_count()),
        }
    }

    /// The full distribution for one conditioning key.
    pub fn row(&self, conditioning: usize) -> Vec<T> {
        match self.rows.get(&(conditioning as u16)) {
            Some(row) => row.clone(),
            None => vec![T::one() / T::of_usize(self.outcome_count()); self.outcome_count()],
        }
    }

    /// Explicit rows in conditioning order.
    pub fn explicit_rows(&self) -> impl Iterator<Item = (usize, &[T])> {
        self.rows.iter().map(|(&c, r)| (c as usize, r.as_slice()))
    }

    pub fn is_explicit(&self, conditioning: usize) -> bool {
        self.rows.contains_key(&(conditioning as u16))
    }

    /// Panics when the row has the wrong length or the key is out of range.
    pub fn set_row(&mut self, conditioning: usize, row: Vec<T>) {
        assert!(
            conditioning < conditioning_count(self.mode),
            "conditioning index {conditioning} out of range for {}",
            self.mode
        );
        assert_eq!(row.len(), self.outcome_count(), "row length for {}", self.mode);
        self.rows.insert(conditioning as u16, row);
    }

    pub fn clear_row(&mut self, conditioning: usize) {
        self.rows.remove(&(conditioning as u16));
    }
}

/// θ = {t, q}: one emission table per mode and the distance prior over
/// sentence-distance buckets (used by attr mode only).
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterTables<T: Real = f64> {
    t: [ModeTable<T>; 3],
    q: Vec<T>,
    buckets: BucketScheme,
    /// Probability floor applied when decoding.
    pub smoothing_epsilon: T,
}

impl<T: Real> ParameterTables<T> {
    /// Every `t` row and `q` uniform.
    pub fn uniform(buckets: BucketScheme, smoothing_epsilon: T) -> Self {
        let n = buckets.len();
        ParameterTables {
            t: std::array::from_fn(|i| ModeTable::uniform(ResolutionMode::ALL[i])),
            q: vec![T::one() / T::of_usize(n); n],
            buckets,
            smoothing_epsilon,
        }
    }

    pub fn table(&self, mode: ResolutionMode) -> &ModeTable<T> {
        &self.t[mode.index()]
    }

    pub fn table_mut(&mut self, mode: ResolutionMode) -> &mut ModeTable<T> {
        &mut self.t[mode.index()]
    }

    pub fn t(&self, mode: ResolutionMode, conditioning: usize, outcome: usize) -> T {
        self.table(mode).get(conditioning, outcome)
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    /// Panics when the length does not match the bucket scheme.
    pub fn set_q(&mut self, q: Vec<T>) {
        assert_eq!(q.len(), self.buckets.len(), "q length");
        self.q = q;
    }

    pub fn buckets(&self) -> &BucketScheme {
        &self.buckets
    }

    /// Largest deviation of any `t` row or `q` from summing to one, and
    /// whether every stored probability is non-negative.
    pub fn normalization_error(&self) -> (f64, bool) {
        let mut worst = 0.0f64;
        let mut nonneg = true;
        let mut check = |row: &[T]| {
            let s: T = row.iter().copied().sum();
            worst = worst.max((s.as_f64() - 1.0).abs());
            nonneg &= row.iter().all(|&p| p >= T::zero());
        };
        for table in &self.t {
            // implicit rows are uniform by construction
            for (_, row) in table.explicit_rows() {
                check(row);
            }
        }
        check(&self.q);
        (worst, nonneg)
    }

    /// Largest absolute difference between corresponding entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for mode in ResolutionMode::ALL {
            let (a, b) = (self.table(*mode), other.table(*mode));
            let keys: std::collections::BTreeSet<usize> = a
                .explicit_rows()
                .chain(b.explicit_rows())
                .map(|(c, _)| c)
                .collect();
            for c in keys {
                for (x, y) in a.row(c).iter().zip(b.row(c)) {
                    worst = worst.max((x.as_f64() - y.as_f64()).abs());
                }
            }
        }
        if self.q.len() != other.q.len() {
            return f64::INFINITY;
        }
        for (x, y) in self.q.iter().zip(&other.q) {
            worst = worst.max((x.as_f64() - y.as_f64()).abs());
        }
        worst
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> ParameterTables<U> {
        let conv = |row: &[T]| row.iter().map(|&x| U::of(x.as_f64())).collect::<Vec<U>>();
        let mut out = ParameterTables::uniform(self.buckets.clone(), U::of(self.smoothing_epsilon.as_f64()));
        for mode in ResolutionMode::ALL {
            for (c, row) in self.table(*mode).explicit_rows() {
                out.table_mut(*mode).set_row(c, conv(row));
            }
        }
        out.q = conv(&self.q);
        out
    }
}

impl<T: Real> Default for ParameterTables<T> {
    fn default() -> Self {
        ParameterTables::uniform(BucketScheme::default(), T::of(DEFAULT_EPSILON))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_values() {
        let p = ParameterTables::<f64>::default();
        assert_eq!(p.t(ResolutionMode::Prec, 0, 2), 1.0 / 3.0);
        assert_eq!(p.t(ResolutionMode::Str, 3, 7), 1.0 / 24.0);
        assert_eq!(p.t(ResolutionMode::Attr, 17, 100), 1.0 / 3024.0);
        assert_eq!(p.q().len(), 6);
        let (err, nonneg) = p.normalization_error();
        assert!(err < 1e-12 && nonneg);
    }

    #[test]
    fn explicit_rows_override() {
        let mut p = ParameterTables::<f64>::default();
        p.table_mut(ResolutionMode::Prec).set_row(1, vec![0.75, 0.25, 0.0]);
        assert_eq!(p.t(ResolutionMode::Prec, 1, 0), 0.75);
        assert_eq!(p.t(ResolutionMode::Prec, 2, 0), 1.0 / 3.0);
        let q = ParameterTables::<f64>::default();
        assert!((p.max_abs_diff(&q) - (0.75 - 1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    #[should_panic(expected = "row length")]
    fn wrong_row_length_panics() {
        ParameterTables::<f64>::default()
            .table_mut(ResolutionMode::Prec)
            .set_row(0, vec![1.0]);
    }

    #[test]
    fn cast_round_trip() {
        let mut p = ParameterTables::<f64>::default();
        p.table_mut(ResolutionMode::Prec).set_row(0, vec![0.5, 0.25, 0.25]);
        // dyadic values survive the trip through f32
        p.set_q(vec![0.5, 0.25, 0.125, 0.0625, 0.03125, 0.03125]);
        p.smoothing_epsilon = 0.5f64.powi(30);
        let back: ParameterTables<f64> = p.cast::<f32>().cast();
        assert_eq!(back, p);
    }
}
