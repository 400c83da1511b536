//! MUC, B³, CEAF_m, CEAF_e, BLANC and the CoNLL average.
//!
//! Spans are compared by exact identity. Mentions that appear in only one
//! of key and response are kept: they count in that side's denominators
//! and never earn credit. Degenerate denominators give 0.

mod assignment;
mod measures;
mod score;

use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::Partition;
use crate::num::Real;

pub use assignment::max_weight_assignment;
pub use measures::{
    b_cubed, b_cubed_counts, blanc, blanc_counts, ceaf_e, ceaf_e_counts, ceaf_m, ceaf_m_counts,
    conll_average, conll_f1, muc, muc_counts, BlancCounts, RatioCounts,
};
pub use score::Score;

/// Every metric's counts for one document, or summed over many.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MetricCounts<T: Real = f64> {
    pub muc: RatioCounts<T>,
    pub b_cubed: RatioCounts<T>,
    pub ceaf_m: RatioCounts<T>,
    pub ceaf_e: RatioCounts<T>,
    pub blanc: BlancCounts,
}

impl<T: Real> MetricCounts<T> {
    pub fn of_document(key: &Partition, response: &Partition) -> Self {
        MetricCounts {
            muc: muc_counts(key, response),
            b_cubed: b_cubed_counts(key, response),
            ceaf_m: ceaf_m_counts(key, response),
            ceaf_e: ceaf_e_counts(key, response),
            blanc: blanc_counts(key, response),
        }
    }

    pub fn add(&mut self, other: &Self) {
        self.muc.add(&other.muc);
        self.b_cubed.add(&other.b_cubed);
        self.ceaf_m.add(&other.ceaf_m);
        self.ceaf_e.add(&other.ceaf_e);
        self.blanc.add(&other.blanc);
    }

    pub fn table(&self) -> ScoreTable<T> {
        let muc = self.muc.score();
        let b_cubed = self.b_cubed.score();
        let ceaf_e = self.ceaf_e.score();
        ScoreTable {
            muc,
            b_cubed,
            ceaf_m: self.ceaf_m.score(),
            ceaf_e,
            blanc: self.blanc.score(),
            conll: conll_average(muc.f1, b_cubed.f1, ceaf_e.f1),
        }
    }
}

/// Micro-averaged scores: counts are summed over documents before any
/// division.
pub fn score_corpus<'a, T: Real>(
    pairs: impl IntoIterator<Item = (&'a Partition, &'a Partition)>,
) -> ScoreTable<T> {
    let mut total = MetricCounts::<T>::default();
    for (key, response) in pairs {
        total.add(&MetricCounts::of_document(key, response));
    }
    total.table()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreTable<T: Real = f64> {
    pub muc: Score<T>,
    pub b_cubed: Score<T>,
    pub ceaf_m: Score<T>,
    pub ceaf_e: Score<T>,
    pub blanc: Score<T>,
    /// Mean F1 of MUC, B³ and CEAF_e.
    pub conll: T,
}

impl<T: Real> ScoreTable<T> {
    pub fn rows(&self) -> [(&'static str, Score<T>); 5] {
        [
            ("MUC", self.muc),
            ("B3", self.b_cubed),
            ("CEAF_m", self.ceaf_m),
            ("CEAF_e", self.ceaf_e),
            ("BLANC", self.blanc),
        ]
    }

    /// Fixed-width text table with two decimals; values are fractions,
    /// or percentages when `percent` is set.
    pub fn render(&self, percent: bool) -> String {
        let scale = if percent { 100.0 } else { 1.0 };
        let v = |x: T| x.as_f64() * scale;
        let mut out = format!("{:<8}{:>9}{:>9}{:>9}\n", "metric", "R", "P", "F1");
        for (name, s) in self.rows() {
            let _ = writeln!(
                out,
                "{name:<8}{:>9.2}{:>9.2}{:>9.2}",
                v(s.recall),
                v(s.precision),
                v(s.f1)
            );
        }
        let _ = writeln!(out, "{:<8}{:>9}{:>9}{:>9.2}", "CoNLL", "", "", v(self.conll));
        out
    }
}
