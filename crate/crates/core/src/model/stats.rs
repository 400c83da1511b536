use std::collections::{BTreeMap, HashMap};

use crate::mentions::ResolutionMode;
use crate::num::Real;

/// Expected counts gathered by the E-step.
///
/// Addition is key-wise, so merging is associative and commutative up to
/// floating point rounding; the trainer merges in a fixed order to make
/// results independent of thread scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct SufficientStatistics<T: Real = f64> {
    /// Per mode: (conditioning, outcome) → expected count.
    pub c_t: [HashMap<(u16, u16), T>; 3],
    /// Per mode: conditioning → expected count.
    pub c_t_cond: [HashMap<u16, T>; 3],
    /// Expected count per distance bucket (attr mentions only).
    pub c_q: Vec<T>,
    pub c_q_total: T,
    pub loglik: T,
    /// How many candidates fell in each bucket, per attr mention, keyed by
    /// that bucket histogram. Needed to renormalize `q` per position.
    pub exposures: BTreeMap<Vec<u32>, T>,
}

impl<T: Real> SufficientStatistics<T> {
    pub fn new(bucket_count: usize) -> Self {
        SufficientStatistics {
            c_t: Default::default(),
            c_t_cond: Default::default(),
            c_q: vec![T::zero(); bucket_count],
            c_q_total: T::zero(),
            loglik: T::zero(),
            exposures: BTreeMap::new(),
        }
    }

    pub fn add_t(&mut self, mode: ResolutionMode, conditioning: u16, outcome: u16, w: T) {
        *self.c_t[mode.index()]
            .entry((conditioning, outcome))
            .or_insert_with(T::zero) += w;
        *self.c_t_cond[mode.index()]
            .entry(conditioning)
            .or_insert_with(T::zero) += w;
    }

    pub fn add_q(&mut self, bucket: usize, w: T) {
        self.c_q[bucket] += w;
        self.c_q_total += w;
    }

    pub fn add_exposure(&mut self, histogram: Vec<u32>) {
        *self.exposures.entry(histogram).or_insert_with(T::zero) += T::one();
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.c_q.len(), other.c_q.len(), "bucket count");
        for m in 0..3 {
            for (&k, &v) in &other.c_t[m] {
                *self.c_t[m].entry(k).or_insert_with(T::zero) += v;
            }
            for (&k, &v) in &other.c_t_cond[m] {
                *self.c_t_cond[m].entry(k).or_insert_with(T::zero) += v;
            }
        }
        for (a, &b) in self.c_q.iter_mut().zip(&other.c_q) {
            *a += b;
        }
        self.c_q_total += other.c_q_total;
        self.loglik += other.loglik;
        for (k, &v) in &other.exposures {
            *self.exposures.entry(k.clone()).or_insert_with(T::zero) += v;
        }
    }

    /// Total expected count over every mode; equals the number of mentions.
    pub fn total_count(&self) -> T {
        self.c_t_cond.iter().flat_map(|m| m.values().copied()).sum()
    }

    /// Largest gap between `c_t_cond` and the outcome marginal of `c_t`.
    pub fn marginal_gap(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..3 {
            let mut marg: HashMap<u16, f64> = HashMap::new();
            for (&(c, _), &v) in &self.c_t[m] {
                *marg.entry(c).or_default() += v.as_f64();
            }
            for (c, &v) in &self.c_t_cond[m] {
                let s = marg.get(c).copied().unwrap_or(0.0);
                worst = worst.max((s - v.as_f64()).abs());
            }
        }
        worst
    }
}
