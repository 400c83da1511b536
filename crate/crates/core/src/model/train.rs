use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::mentions::ResolutionMode;
use crate::num::Real;
use crate::representation::{outcome_count, BucketScheme, EncodedDocument};

use super::error::ModelError;
use super::inference::accumulate_document;
use super::params::{ParameterTables, DEFAULT_EPSILON};
use super::stats::SufficientStatistics;

/// Documents per E-step work unit. Fixed so the reduction order, and with
/// it every rounding step, does not depend on the worker count.
const CHUNK: usize = 8;

const Q_MAX_ROUNDS: usize = 10_000;

/// Maximizes the expected complete log-likelihood given `stats`.
///
/// `t` rows are count ratios; conditioning keys never observed stay
/// uniform. `q` maximizes `Σ_b c_b log q_b − Σ_j log Σ_i q_{b(j,i)}`, the
/// prior term once `q` is renormalized over each mention's candidates. It
/// reduces to `c_b / Σ c` when every mention sees every bucket equally
/// often (or when no exposure data is present); otherwise it is found by
/// a minorize-maximize fixed point started from that ratio.
pub fn m_step<T: Real>(
    stats: &SufficientStatistics<T>,
    buckets: &BucketScheme,
    smoothing_epsilon: T,
) -> ParameterTables<T> {
    let mut theta = ParameterTables::uniform(buckets.clone(), smoothing_epsilon);
    for mode in ResolutionMode::ALL {
        let m = mode.index();
        let mut rows: BTreeMap<u16, Vec<T>> = BTreeMap::new();
        for (&(c, o), &v) in &stats.c_t[m] {
            assert!(v >= T::zero(), "negative expected count");
            rows.entry(c)
                .or_insert_with(|| vec![T::zero(); outcome_count(*mode)])[o as usize] = v;
        }
        for (c, mut row) in rows {
            let total = stats.c_t_cond[m].get(&c).copied().unwrap_or_else(T::zero);
            if total > T::zero() {
                for p in &mut row {
                    *p /= total;
                }
                theta.table_mut(*mode).set_row(c as usize, row);
            }
        }
    }
    assert_eq!(stats.c_q.len(), buckets.len(), "bucket count");
    theta.set_q(solve_q(&stats.c_q, &stats.exposures));
    theta
}

fn normalized<T: Real>(v: &[T]) -> Vec<T> {
    let s: T = v.iter().copied().sum();
    v.iter().map(|&x| x / s).collect()
}

fn solve_q<T: Real>(counts: &[T], exposures: &BTreeMap<Vec<u32>, T>) -> Vec<T> {
    assert!(counts.iter().all(|&c| c >= T::zero()), "negative expected count");
    let total: T = counts.iter().copied().sum();
    if total <= T::zero() {
        return vec![T::one() / T::of_usize(counts.len()); counts.len()];
    }
    let mut q = normalized(counts);
    if exposures.is_empty() {
        return q;
    }
    let tol = T::epsilon() * T::of(16.0);
    for _ in 0..Q_MAX_ROUNDS {
        let mut denom = vec![T::zero(); q.len()];
        for (hist, &w) in exposures {
            let mass: T = hist.iter().zip(&q).map(|(&n, &p)| T::of_usize(n as usize) * p).sum();
            if mass > T::zero() {
                for (d, &n) in denom.iter_mut().zip(hist) {
                    *d += w * T::of_usize(n as usize) / mass;
                }
            }
        }
        let raw: Vec<T> = counts
            .iter()
            .zip(&denom)
            .map(|(&c, &d)| if c > T::zero() && d > T::zero() { c / d } else { T::zero() })
            .collect();
        let next = normalized(&raw);
        let delta = next
            .iter()
            .zip(&q)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        q = next;
        if delta <= tol {
            break;
        }
    }
    q
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub iterations: usize,
    /// Decode-time probability floor stored in the model.
    pub epsilon: f64,
    pub workers: usize,
    pub buckets: BucketScheme,
    /// Keep a copy of θ after every iteration.
    pub keep_iterations: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: 10,
            epsilon: DEFAULT_EPSILON,
            workers: 1,
            buckets: BucketScheme::default(),
            keep_iterations: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based; θ after this many M-steps.
    pub iteration: usize,
    pub loglik: f64,
    pub dev_f1: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome<T: Real = f64> {
    /// θ_1..θ_T when `keep_iterations` is set, otherwise empty.
    pub iterations: Vec<ParameterTables<T>>,
    pub selected: ParameterTables<T>,
    pub selected_iteration: usize,
    /// Log-likelihood of the uniform starting point.
    pub initial_loglik: f64,
    pub trace: Vec<IterationRecord>,
}

/// Scores a candidate θ on held-out data; higher is better.
pub type DevEvaluator<'a, T> = &'a (dyn Fn(&ParameterTables<T>) -> f64 + Sync);

/// E-step over a corpus. Chunks run in parallel and are reduced in corpus
/// order, so the result does not depend on the pool size.
pub fn e_step_corpus<T: Real>(
    corpus: &[EncodedDocument],
    theta: &ParameterTables<T>,
    pool: &rayon::ThreadPool,
) -> Result<SufficientStatistics<T>, ModelError> {
    let bucket_count = theta.buckets().len();
    let parts: Vec<Result<SufficientStatistics<T>, ModelError>> = pool.install(|| {
        corpus
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut s = SufficientStatistics::new(bucket_count);
                for doc in chunk {
                    accumulate_document(doc, theta, &mut s)?;
                }
                Ok(s)
            })
            .collect()
    });
    let mut total = SufficientStatistics::new(bucket_count);
    for part in parts {
        total.merge(&part?);
    }
    Ok(total)
}

/// EM from uniform parameters for `config.iterations` rounds.
///
/// Selects the iterate with the best dev score when `dev` is given,
/// otherwise the best training log-likelihood. The trace records the
/// log-likelihood of every iterate, which takes one E-step past the last
/// M-step.
pub fn train_em<T: Real>(
    corpus: &[EncodedDocument],
    config: &TrainConfig,
    dev: Option<DevEvaluator<'_, T>>,
) -> Result<TrainOutcome<T>, ModelError> {
    if corpus.iter().all(|d| d.is_empty()) {
        return Err(ModelError::EmptyCorpus);
    }
    if config.iterations == 0 {
        return Err(ModelError::Config("iterations must be at least 1".into()));
    }
    if config.workers == 0 {
        return Err(ModelError::Config("workers must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&config.epsilon) {
        return Err(ModelError::Config(format!("epsilon {} is not in [0, 1)", config.epsilon)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| ModelError::Config(e.to_string()))?;

    let epsilon = T::of(config.epsilon);
    let mut theta = ParameterTables::uniform(config.buckets.clone(), epsilon);
    let mut stats = e_step_corpus(corpus, &theta, &pool)?;
    let initial_loglik = stats.loglik.as_f64();

    let mut iterations = Vec::new();
    let mut trace = Vec::with_capacity(config.iterations);
    let mut best: Option<(f64, usize, ParameterTables<T>)> = None;
    for it in 1..=config.iterations {
        theta = m_step(&stats, &config.buckets, epsilon);
        stats = e_step_corpus(corpus, &theta, &pool)?;
        let loglik = stats.loglik.as_f64();
        let dev_f1 = dev.map(|f| f(&theta));
        let score = dev_f1.unwrap_or(loglik);
        if best.as_ref().is_none_or(|(b, _, _)| score > *b) {
            best = Some((score, it, theta.clone()));
        }
        trace.push(IterationRecord {
            iteration: it,
            loglik,
            dev_f1,
        });
        if config.keep_iterations {
            iterations.push(theta.clone());
        }
    }
    let (_, selected_iteration, selected) = best.expect("at least one iteration");
    Ok(TrainOutcome {
        iterations,
        selected,
        selected_iteration,
        initial_loglik,
        trace,
    })
}
