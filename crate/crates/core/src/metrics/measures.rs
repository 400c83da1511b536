use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::corpus::{Partition, Span};
use crate::num::Real;

use super::assignment::max_weight_assignment;
use super::score::Score;

/// Numerators and denominators of a recall/precision metric, so that
/// corpus totals can be formed before dividing.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct RatioCounts<T: Real = f64> {
    pub recall_num: T,
    pub recall_den: T,
    pub precision_num: T,
    pub precision_den: T,
}

impl<T: Real> RatioCounts<T> {
    pub fn add(&mut self, other: &Self) {
        self.recall_num += other.recall_num;
        self.recall_den += other.recall_den;
        self.precision_num += other.precision_num;
        self.precision_den += other.precision_den;
    }

    pub fn score(&self) -> Score<T> {
        Score::from_recall_precision(
            ratio(self.recall_num, self.recall_den),
            ratio(self.precision_num, self.precision_den),
        )
    }
}

fn ratio<T: Real>(num: T, den: T) -> T {
    if den > T::zero() {
        num / den
    } else {
        T::zero()
    }
}

/// Pair counts behind BLANC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BlancCounts {
    pub key_coref: u64,
    pub response_coref: u64,
    pub common_coref: u64,
    pub key_non_coref: u64,
    pub response_non_coref: u64,
    pub common_non_coref: u64,
}

impl BlancCounts {
    pub fn add(&mut self, other: &Self) {
        self.key_coref += other.key_coref;
        self.response_coref += other.response_coref;
        self.common_coref += other.common_coref;
        self.key_non_coref += other.key_non_coref;
        self.response_non_coref += other.response_non_coref;
        self.common_non_coref += other.common_non_coref;
    }

    /// Mean of the coreference-link and non-coreference-link scores. When
    /// neither side has links of one kind, only the other kind counts; with
    /// no links at all the score is zero.
    pub fn score<T: Real>(&self) -> Score<T> {
        let part = |common: u64, key: u64, response: u64| {
            Score::<T>::from_recall_precision(
                ratio(T::of(common as f64), T::of(key as f64)),
                ratio(T::of(common as f64), T::of(response as f64)),
            )
        };
        let c = part(self.common_coref, self.key_coref, self.response_coref);
        let n = part(self.common_non_coref, self.key_non_coref, self.response_non_coref);
        let no_coref = self.key_coref == 0 && self.response_coref == 0;
        let no_non_coref = self.key_non_coref == 0 && self.response_non_coref == 0;
        match (no_coref, no_non_coref) {
            (true, true) => Score::zero(),
            (true, false) => n,
            (false, true) => c,
            (false, false) => {
                let two = T::of(2.0);
                Score::new(
                    (c.recall + n.recall) / two,
                    (c.precision + n.precision) / two,
                    (c.f1 + n.f1) / two,
                )
            }
        }
    }
}

/// How key and response chains intersect.
struct Overlap {
    key_sizes: Vec<usize>,
    response_sizes: Vec<usize>,
    /// (key chain, response chain) → shared mentions; ordered so float
    /// sums are reproducible.
    cells: BTreeMap<(usize, usize), usize>,
}

impl Overlap {
    fn new(key: &Partition, response: &Partition) -> Self {
        let mut chain_of: HashMap<&Span, usize> = HashMap::new();
        for (r, chain) in response.chains().iter().enumerate() {
            for m in chain {
                chain_of.insert(m, r);
            }
        }
        let mut cells = BTreeMap::new();
        for (k, chain) in key.chains().iter().enumerate() {
            for m in chain {
                if let Some(&r) = chain_of.get(m) {
                    *cells.entry((k, r)).or_insert(0) += 1;
                }
            }
        }
        Overlap {
            key_sizes: key.chains().iter().map(Vec::len).collect(),
            response_sizes: response.chains().iter().map(Vec::len).collect(),
            cells,
        }
    }

    fn transposed(&self) -> Self {
        Overlap {
            key_sizes: self.response_sizes.clone(),
            response_sizes: self.key_sizes.clone(),
            cells: self.cells.iter().map(|(&(k, r), &n)| ((r, k), n)).collect(),
        }
    }
}

fn of<T: Real>(n: usize) -> T {
    T::of_usize(n)
}

/// Link-based recall of `o`'s key side: each key chain needs `|K| - 1`
/// links and is cut into one piece per response chain it touches plus
/// one per mention the response lacks.
fn muc_recall<T: Real>(o: &Overlap) -> (T, T) {
    let mut touched = vec![0usize; o.key_sizes.len()];
    let mut covered = vec![0usize; o.key_sizes.len()];
    for (&(k, _), &n) in &o.cells {
        touched[k] += 1;
        covered[k] += n;
    }
    let mut num = 0usize;
    let mut den = 0usize;
    for (k, &size) in o.key_sizes.iter().enumerate() {
        let pieces = touched[k] + (size - covered[k]);
        num += size - pieces;
        den += size - 1;
    }
    (of(num), of(den))
}

pub fn muc_counts<T: Real>(key: &Partition, response: &Partition) -> RatioCounts<T> {
    let o = Overlap::new(key, response);
    let (recall_num, recall_den) = muc_recall(&o);
    let (precision_num, precision_den) = muc_recall(&o.transposed());
    RatioCounts {
        recall_num,
        recall_den,
        precision_num,
        precision_den,
    }
}

/// MUC: chains as link sets. Singleton chains contribute nothing.
pub fn muc<T: Real>(key: &Partition, response: &Partition) -> Score<T> {
    muc_counts(key, response).score()
}

pub fn b_cubed_counts<T: Real>(key: &Partition, response: &Partition) -> RatioCounts<T> {
    let o = Overlap::new(key, response);
    let mut counts = RatioCounts {
        recall_den: of(key.mention_count()),
        precision_den: of(response.mention_count()),
        ..RatioCounts::default()
    };
    for (&(k, r), &n) in &o.cells {
        let sq: T = of(n * n);
        counts.recall_num += sq / of(o.key_sizes[k]);
        counts.precision_num += sq / of(o.response_sizes[r]);
    }
    counts
}

/// B³: per-mention overlap of the chains containing it. A mention on one
/// side only counts in that side's denominator and adds nothing above.
pub fn b_cubed<T: Real>(key: &Partition, response: &Partition) -> Score<T> {
    b_cubed_counts(key, response).score()
}

/// Best total similarity over one-to-one chain alignments. Chains that
/// share no mention have similarity 0, so each connected group of
/// overlapping chains is solved on its own.
fn ceaf_alignment<T: Real>(o: &Overlap, phi: impl Fn(usize, usize, usize) -> T) -> T {
    let nk = o.key_sizes.len();
    let mut parent: Vec<usize> = (0..nk + o.response_sizes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(k, r) in o.cells.keys() {
        let (a, b) = (find(&mut parent, k), find(&mut parent, nk + r));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for &(k, r) in o.cells.keys() {
        let g = groups.entry(find(&mut parent, k)).or_default();
        if !g.0.contains(&k) {
            g.0.push(k);
        }
        if !g.1.contains(&r) {
            g.1.push(r);
        }
    }
    let mut total = T::zero();
    for (keys, responses) in groups.values() {
        let sim = |k: usize, r: usize| match o.cells.get(&(k, r)) {
            Some(&n) => phi(n, o.key_sizes[k], o.response_sizes[r]),
            None => T::zero(),
        };
        if keys.len() == 1 && responses.len() == 1 {
            total += sim(keys[0], responses[0]);
            continue;
        }
        let weights: Vec<Vec<f64>> = keys
            .iter()
            .map(|&k| responses.iter().map(|&r| sim(k, r).as_f64()).collect())
            .collect();
        for (i, j) in max_weight_assignment(&weights) {
            total += sim(keys[i], responses[j]);
        }
    }
    total
}

pub fn ceaf_m_counts<T: Real>(key: &Partition, response: &Partition) -> RatioCounts<T> {
    let o = Overlap::new(key, response);
    let best = ceaf_alignment(&o, |n, _, _| of::<T>(n));
    RatioCounts {
        recall_num: best,
        recall_den: of(key.mention_count()),
        precision_num: best,
        precision_den: of(response.mention_count()),
    }
}

/// Mention-based CEAF, similarity `|K ∩ R|`.
pub fn ceaf_m<T: Real>(key: &Partition, response: &Partition) -> Score<T> {
    ceaf_m_counts(key, response).score()
}

pub fn ceaf_e_counts<T: Real>(key: &Partition, response: &Partition) -> RatioCounts<T> {
    let o = Overlap::new(key, response);
    let best = ceaf_alignment(&o, |n, k, r| of::<T>(2 * n) / of::<T>(k + r));
    RatioCounts {
        recall_num: best,
        recall_den: of(key.len()),
        precision_num: best,
        precision_den: of(response.len()),
    }
}

/// Entity-based CEAF, similarity `2|K ∩ R| / (|K| + |R|)`.
pub fn ceaf_e<T: Real>(key: &Partition, response: &Partition) -> Score<T> {
    ceaf_e_counts(key, response).score()
}

fn pairs(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

pub fn blanc_counts(key: &Partition, response: &Partition) -> BlancCounts {
    let o = Overlap::new(key, response);
    let key_coref: u64 = o.key_sizes.iter().map(|&n| pairs(n)).sum();
    let response_coref: u64 = o.response_sizes.iter().map(|&n| pairs(n)).sum();
    let common_coref: u64 = o.cells.values().map(|&n| pairs(n)).sum();
    let mut shared_in_key = vec![0usize; o.key_sizes.len()];
    let mut shared_in_response = vec![0usize; o.response_sizes.len()];
    for (&(k, r), &n) in &o.cells {
        shared_in_key[k] += n;
        shared_in_response[r] += n;
    }
    let shared: usize = shared_in_key.iter().sum();
    // pairs of shared mentions split by both sides, by inclusion-exclusion
    let common_non_coref = pairs(shared) + common_coref
        - shared_in_key.iter().map(|&n| pairs(n)).sum::<u64>()
        - shared_in_response.iter().map(|&n| pairs(n)).sum::<u64>();
    BlancCounts {
        key_coref,
        response_coref,
        common_coref,
        key_non_coref: pairs(key.mention_count()) - key_coref,
        response_non_coref: pairs(response.mention_count()) - response_coref,
        common_non_coref,
    }
}

/// BLANC over mention pairs of each side.
pub fn blanc<T: Real>(key: &Partition, response: &Partition) -> Score<T> {
    blanc_counts(key, response).score()
}

/// Mean of three F1 values (MUC, B³, CEAF_e).
pub fn conll_average<T: Real>(muc_f1: T, b_cubed_f1: T, ceaf_e_f1: T) -> T {
    (muc_f1 + b_cubed_f1 + ceaf_e_f1) / T::of(3.0)
}

/// The CoNLL score of one document pair.
pub fn conll_f1<T: Real>(key: &Partition, response: &Partition) -> T {
    conll_average(
        muc::<T>(key, response).f1,
        b_cubed::<T>(key, response).f1,
        ceaf_e::<T>(key, response).f1,
    )
}
