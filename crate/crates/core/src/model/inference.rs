use crate::mentions::{Candidate, Mention, ResolutionMode};
use crate::num::Real;
use crate::representation::{encode, EncodedDocument, EncodedMention};

use super::error::ModelError;
use super::params::ParameterTables;
use super::stats::SufficientStatistics;

/// Posterior over the antecedents of mention `j` (1-based): `weights[k]`
/// for `k = 0..j`, where 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorRow<T: Real = f64> {
    pub j: usize,
    pub weights: Vec<T>,
}

/// `t(m_j | m_k, mode)`, floored at the smoothing epsilon.
pub fn prob_mention<T: Real>(
    m_j: &Mention,
    m_k: Candidate<'_>,
    mode: ResolutionMode,
    theta: &ParameterTables<T>,
) -> T {
    let code = encode(m_j, m_k, mode);
    theta
        .t(mode, code.conditioning.index(), code.outcome.index())
        .max(theta.smoothing_epsilon)
}

/// Prior probability that candidate `k` is the antecedent of `mention`.
///
/// Uniform `1/j` for str and prec. For attr, `q` of the candidate's
/// distance bucket renormalized over all `j` candidates; uniform again if
/// every candidate's bucket has zero mass.
pub fn prior_antecedent<T: Real>(k: usize, mention: &EncodedMention, theta: &ParameterTables<T>) -> T {
    let j = mention.candidates.len();
    assert!(k < j, "candidate {k} is not before mention {j}");
    let uniform = T::one() / T::of_usize(j);
    match mention.mode {
        ResolutionMode::Str | ResolutionMode::Prec => uniform,
        ResolutionMode::Attr => {
            let q = theta.q();
            let total: T = mention.candidates.iter().map(|c| q[c.bucket as usize]).sum();
            if total > T::zero() {
                q[mention.candidates[k].bucket as usize] / total
            } else {
                uniform
            }
        }
    }
}

/// `t · prior` for every candidate. The floor applies to `t` only.
fn numerators<T: Real>(mention: &EncodedMention, theta: &ParameterTables<T>, floor: bool) -> Vec<T> {
    let j = mention.candidates.len();
    let table = theta.table(mention.mode);
    let emission = |c: &crate::representation::CandidateCode| {
        let t = table.get(c.conditioning as usize, c.outcome as usize);
        if floor {
            t.max(theta.smoothing_epsilon)
        } else {
            t
        }
    };
    match mention.mode {
        ResolutionMode::Str | ResolutionMode::Prec => {
            let prior = T::one() / T::of_usize(j);
            mention.candidates.iter().map(|c| emission(c) * prior).collect()
        }
        ResolutionMode::Attr => {
            let q = theta.q();
            let total: T = mention.candidates.iter().map(|c| q[c.bucket as usize]).sum();
            mention
                .candidates
                .iter()
                .map(|c| {
                    let prior = if total > T::zero() {
                        q[c.bucket as usize] / total
                    } else {
                        T::one() / T::of_usize(j)
                    };
                    emission(c) * prior
                })
                .collect()
        }
    }
}

fn degenerate(doc: &EncodedDocument, j: usize) -> ModelError {
    ModelError::DegenerateRow {
        doc: doc.doc_id.clone(),
        mention: j,
    }
}

/// `L_jk = t·prior / Σ_i t·prior` with `t` floored at the smoothing
/// epsilon. `j` is 1-based.
pub fn posterior_row<T: Real>(
    doc: &EncodedDocument,
    j: usize,
    theta: &ParameterTables<T>,
) -> Result<PosteriorRow<T>, ModelError> {
    let mut weights = numerators(&doc.mentions[j - 1], theta, true);
    let total: T = weights.iter().copied().sum();
    if total <= T::zero() || !total.is_finite() {
        return Err(degenerate(doc, j));
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(PosteriorRow { j, weights })
}

/// Adds one document's expected counts to `stats`, using exact
/// (unfloored) parameters.
pub fn accumulate_document<T: Real>(
    doc: &EncodedDocument,
    theta: &ParameterTables<T>,
    stats: &mut SufficientStatistics<T>,
) -> Result<(), ModelError> {
    let bucket_count = theta.buckets().len();
    for (i, mention) in doc.mentions.iter().enumerate() {
        let scores = numerators(mention, theta, false);
        let total: T = scores.iter().copied().sum();
        if total <= T::zero() || !total.is_finite() {
            return Err(degenerate(doc, i + 1));
        }
        stats.loglik += total.ln();
        for (c, &s) in mention.candidates.iter().zip(&scores) {
            let l = s / total;
            stats.add_t(mention.mode, c.conditioning, c.outcome, l);
            if mention.mode == ResolutionMode::Attr {
                stats.add_q(c.bucket as usize, l);
            }
        }
        if mention.mode == ResolutionMode::Attr {
            let mut histogram = vec![0u32; bucket_count];
            for c in &mention.candidates {
                histogram[c.bucket as usize] += 1;
            }
            stats.add_exposure(histogram);
        }
    }
    Ok(())
}

/// Expected counts and log-likelihood of one document under `theta`.
pub fn e_step_document<T: Real>(
    doc: &EncodedDocument,
    theta: &ParameterTables<T>,
) -> Result<SufficientStatistics<T>, ModelError> {
    let mut stats = SufficientStatistics::new(theta.buckets().len());
    accumulate_document(doc, theta, &mut stats)?;
    Ok(stats)
}

/// Incomplete-data log-likelihood `Σ_docs Σ_j log Σ_k t·prior`, exact
/// parameters. A mention with no supported antecedent contributes `-inf`.
pub fn log_likelihood<T: Real>(corpus: &[EncodedDocument], theta: &ParameterTables<T>) -> T {
    corpus
        .iter()
        .flat_map(|d| &d.mentions)
        .map(|m| numerators(m, theta, false).into_iter().sum::<T>().ln())
        .sum()
}

/// Antecedent choices for a document and the entities they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    /// `antecedents[j - 1]` is `c_j`, 0 meaning the root.
    pub antecedents: Vec<usize>,
    /// 1-based mention indices per entity, ordered by first mention.
    pub clusters: Vec<Vec<usize>>,
}

/// Per-mention argmax of `t · prior` with the epsilon floor; ties go to
/// the closest candidate.
pub fn decode_document<T: Real>(doc: &EncodedDocument, theta: &ParameterTables<T>) -> Decoded {
    let antecedents: Vec<usize> = doc
        .mentions
        .iter()
        .map(|m| {
            let scores = numerators(m, theta, true);
            let mut best = 0;
            for (k, &s) in scores.iter().enumerate() {
                if s >= scores[best] {
                    best = k;
                }
            }
            best
        })
        .collect();
    let clusters = clusters_from_antecedents(&antecedents);
    Decoded {
        antecedents,
        clusters,
    }
}

/// Transitive closure of antecedent links. Every mention lands in exactly
/// one cluster; root links start a new one.
pub fn clusters_from_antecedents(antecedents: &[usize]) -> Vec<Vec<usize>> {
    let mut cluster_of = vec![0usize; antecedents.len() + 1];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &k) in antecedents.iter().enumerate() {
        let j = i + 1;
        assert!(k < j, "antecedent {k} of mention {j} does not precede it");
        if k == 0 {
            cluster_of[j] = clusters.len();
            clusters.push(vec![j]);
        } else {
            cluster_of[j] = cluster_of[k];
            clusters[cluster_of[k]].push(j);
        }
    }
    clusters
}
