//! Generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use coref_em::corpus::{load_corpus, Document, LoadOptions, Partition, Span};
use coref_em::mentions::{
    Animacy, AttributeBundle, Gender, MentionType, Number, Person, ResolutionMode, SemClass,
};
use coref_em::model::ParameterTables;
use coref_em::representation::{
    AttrTuple, BucketScheme, CandidateCode, EncodedDocument, EncodedMention,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/fixture.conll")
}

pub fn fixture_documents() -> Vec<Document> {
    load_corpus(&[fixture_path()], &LoadOptions::default())
        .expect("fixture parses")
        .documents
}

/// Random point on the simplex; roughly a third of entries are zero when
/// `sparse` is set.
pub fn random_row(rng: &mut ChaCha8Rng, n: usize, sparse: bool) -> Vec<f64> {
    let mut row: Vec<f64> = (0..n)
        .map(|_| {
            if sparse && rng.gen_bool(0.3) {
                0.0
            } else {
                rng.gen_range(0.01..1.0)
            }
        })
        .collect();
    if row.iter().all(|&x| x == 0.0) {
        row[rng.gen_range(0..n)] = 1.0;
    }
    let s: f64 = row.iter().sum();
    row.iter_mut().for_each(|x| *x /= s);
    row
}

/// A handful of attr tuples so random documents revisit the same rows.
pub fn tuple_pool() -> Vec<AttrTuple> {
    let t = |mention_type, number, gender, animacy, semclass| AttrTuple {
        mention_type,
        attributes: AttributeBundle {
            number,
            gender,
            person: Person::Third,
            animacy,
            semclass,
        },
    };
    vec![
        t(MentionType::Proper, Number::Singular, Gender::Male, Animacy::Animate, SemClass::Person),
        t(MentionType::Proper, Number::Singular, Gender::Neutral, Animacy::Inanimate, SemClass::Organization),
        t(MentionType::Nominal, Number::Singular, Gender::Neutral, Animacy::Inanimate, SemClass::Object),
        t(MentionType::Pronoun, Number::Singular, Gender::Male, Animacy::Animate, SemClass::Person),
        t(MentionType::Pronoun, Number::Plural, Gender::Unknown, Animacy::Unknown, SemClass::Unknown),
        t(MentionType::Proper, Number::Singular, Gender::Female, Animacy::Animate, SemClass::Person),
        t(MentionType::Proper, Number::Singular, Gender::Neutral, Animacy::Inanimate, SemClass::Gpe),
        t(MentionType::Nominal, Number::Plural, Gender::Unknown, Animacy::Animate, SemClass::Person),
        t(MentionType::Nominal, Number::Singular, Gender::Neutral, Animacy::Inanimate, SemClass::Event),
        t(MentionType::Pronoun, Number::Singular, Gender::Female, Animacy::Animate, SemClass::Person),
    ]
}

/// Random θ with explicit rows for every key a random document can use.
pub fn random_theta(rng: &mut ChaCha8Rng) -> ParameterTables<f64> {
    let mut theta = ParameterTables::<f64>::default();
    for c in 0..4 {
        let row = random_row(rng, 3, false);
        theta.table_mut(ResolutionMode::Prec).set_row(c, row);
        let row = random_row(rng, 24, true);
        theta.table_mut(ResolutionMode::Str).set_row(c, row);
    }
    let pool = tuple_pool();
    let conds = std::iter::once(0).chain(pool.iter().map(|t| 1 + t.index()));
    for c in conds {
        let mut row = vec![0.0; AttrTuple::COUNT];
        for (t, p) in pool.iter().zip(random_row(rng, pool.len(), true)) {
            row[t.index()] = p;
        }
        theta.table_mut(ResolutionMode::Attr).set_row(c, row);
    }
    let q = random_row(rng, theta.buckets().len(), false);
    theta.set_q(q);
    theta
}

struct Latent {
    sentence: usize,
    tuple: AttrTuple,
}

fn candidate_codes(
    latents: &[Latent],
    j: usize,
    mode: ResolutionMode,
    outcome: usize,
    scheme: &BucketScheme,
) -> Vec<CandidateCode> {
    (0..j)
        .map(|k| {
            let (conditioning, bucket) = if k == 0 {
                (0, scheme.index(coref_em::representation::DistanceBucket::Root))
            } else {
                let ante = &latents[k - 1];
                let cond = match mode {
                    ResolutionMode::Attr => 1 + ante.tuple.index(),
                    _ => 1 + ante.tuple.mention_type.index(),
                };
                let d = latents[j - 1].sentence - ante.sentence;
                (cond, scheme.index(scheme.bucket(d)))
            };
            CandidateCode {
                conditioning: conditioning as u16,
                outcome: outcome as u16,
                bucket: bucket as u8,
            }
        })
        .collect()
}

/// A random encoded document with up to `max_mentions` mentions in any of
/// the three modes.
pub fn random_document(rng: &mut ChaCha8Rng, max_mentions: usize) -> EncodedDocument {
    let scheme = BucketScheme::default();
    let pool = tuple_pool();
    let n = rng.gen_range(1..=max_mentions);
    let mut latents = Vec::with_capacity(n);
    let mut sentence = 0;
    for _ in 0..n {
        sentence += rng.gen_range(0..3);
        latents.push(Latent {
            sentence,
            tuple: pool[rng.gen_range(0..pool.len())],
        });
    }
    let mentions = (1..=n)
        .map(|j| {
            let mode = ResolutionMode::ALL[rng.gen_range(0..3)];
            let own = latents[j - 1].tuple;
            let outcome = match mode {
                ResolutionMode::Prec => own.mention_type.index(),
                ResolutionMode::Str => own.mention_type.index() * 8 + rng.gen_range(0..8),
                ResolutionMode::Attr => own.index(),
            };
            EncodedMention {
                mode,
                candidates: candidate_codes(&latents, j, mode, outcome, &scheme),
            }
        })
        .collect();
    EncodedDocument {
        doc_id: format!("random-{n}"),
        mentions,
    }
}

/// Known parameters for the synthetic generative corpus. Only prec and
/// attr modes are sampled: str outcomes describe a pair, not the mention,
/// so they cannot be drawn independently of the antecedent's surface.
pub struct Truth {
    pub theta: ParameterTables<f64>,
    pub pool: Vec<AttrTuple>,
}

pub fn truth() -> Truth {
    let mut pool = tuple_pool();
    pool.truncate(5);
    let mut theta = ParameterTables::<f64>::default();
    let prec = [
        [0.6, 0.3, 0.1],
        [0.8, 0.1, 0.1],
        [0.1, 0.8, 0.1],
        [0.1, 0.1, 0.8],
    ];
    for (c, row) in prec.iter().enumerate() {
        theta.table_mut(ResolutionMode::Prec).set_row(c, row.to_vec());
    }
    // ROOT is uniform over the pool; every antecedent tuple puts most of
    // its mass on a different outcome, so posteriors are sharp enough to
    // pin down q from 10k documents
    let n = pool.len();
    let mut root = vec![0.0; AttrTuple::COUNT];
    for t in &pool {
        root[t.index()] = 1.0 / n as f64;
    }
    theta.table_mut(ResolutionMode::Attr).set_row(0, root);
    for (i, cond) in pool.iter().enumerate() {
        let peak = (i + 3) % n;
        let mut row = vec![0.0; AttrTuple::COUNT];
        for (o, t) in pool.iter().enumerate() {
            row[t.index()] = if o == peak { 0.955 } else { 0.045 / (n - 1) as f64 };
        }
        theta.table_mut(ResolutionMode::Attr).set_row(1 + cond.index(), row);
    }
    theta.set_q(vec![0.35, 0.25, 0.10, 0.05, 0.05, 0.20]);
    Truth { theta, pool }
}

/// Share of sampled mentions in attr mode; only these inform q.
pub const ATTR_SHARE: f64 = 0.6;

fn sample(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Draws documents from the generative model: each mention picks a mode,
/// an antecedent from the prior, then its outcome from `t` given that
/// antecedent.
pub fn sample_corpus(truth: &Truth, docs: usize, seed: u64) -> Vec<EncodedDocument> {
    let mut rng = rng(seed);
    let scheme = truth.theta.buckets().clone();
    let q = truth.theta.q().to_vec();
    (0..docs)
        .map(|d| {
            let n = rng.gen_range(2..=20);
            let mut latents: Vec<Latent> = Vec::with_capacity(n);
            let mut mentions = Vec::with_capacity(n);
            let mut sentence = 0;
            for j in 1..=n {
                sentence += sample(&mut rng, &[0.45, 0.3, 0.15, 0.1]);
                let mode = if rng.gen_bool(ATTR_SHARE) {
                    ResolutionMode::Attr
                } else {
                    ResolutionMode::Prec
                };
                let bucket_of = |k: usize, latents: &[Latent]| {
                    if k == 0 {
                        scheme.len() - 1
                    } else {
                        scheme.index(scheme.bucket(sentence - latents[k - 1].sentence))
                    }
                };
                let prior: Vec<f64> = match mode {
                    ResolutionMode::Attr => (0..j).map(|k| q[bucket_of(k, &latents)]).collect(),
                    _ => vec![1.0; j],
                };
                let total: f64 = prior.iter().sum();
                let prior: Vec<f64> = prior.iter().map(|p| p / total).collect();
                let k = sample(&mut rng, &prior);
                let tuple = match mode {
                    ResolutionMode::Attr => {
                        let cond = if k == 0 { 0 } else { 1 + latents[k - 1].tuple.index() };
                        let row = truth.theta.table(ResolutionMode::Attr).row(cond);
                        let probs: Vec<f64> = truth.pool.iter().map(|t| row[t.index()]).collect();
                        truth.pool[sample(&mut rng, &probs)]
                    }
                    _ => {
                        let cond = if k == 0 { 0 } else { 1 + latents[k - 1].tuple.mention_type.index() };
                        let row = truth.theta.table(ResolutionMode::Prec).row(cond);
                        let ty = MentionType::ALL[sample(&mut rng, &row)];
                        // remaining attributes are exogenous in prec mode
                        let same: Vec<&AttrTuple> =
                            truth.pool.iter().filter(|t| t.mention_type == ty).collect();
                        *same[rng.gen_range(0..same.len())]
                    }
                };
                latents.push(Latent { sentence, tuple });
                let outcome = match mode {
                    ResolutionMode::Attr => tuple.index(),
                    _ => tuple.mention_type.index(),
                };
                mentions.push(EncodedMention {
                    mode,
                    candidates: candidate_codes(&latents, j, mode, outcome, &scheme),
                });
            }
            EncodedDocument {
                doc_id: format!("synthetic-{d}"),
                mentions,
            }
        })
        .collect()
}

/// Score of candidate `k` for mention `j`, straight from the definitions.
pub fn oracle_score(doc: &EncodedDocument, j: usize, k: usize, theta: &ParameterTables<f64>, floor: bool) -> f64 {
    let m = &doc.mentions[j - 1];
    let c = m.candidates[k];
    let mut t = theta.t(m.mode, c.conditioning as usize, c.outcome as usize);
    if floor {
        t = t.max(theta.smoothing_epsilon);
    }
    let prior = match m.mode {
        ResolutionMode::Attr => {
            let q = theta.q();
            let total: f64 = m.candidates.iter().map(|c| q[c.bucket as usize]).sum();
            if total > 0.0 {
                q[c.bucket as usize] / total
            } else {
                1.0 / j as f64
            }
        }
        _ => 1.0 / j as f64,
    };
    t * prior
}

/// Joint argmax over every antecedent vector; among equal maxima the
/// lexicographically largest vector wins.
pub fn brute_force_decode(doc: &EncodedDocument, theta: &ParameterTables<f64>) -> Vec<usize> {
    let n = doc.mentions.len();
    let mut vector = vec![0usize; n];
    let mut best = (f64::NEG_INFINITY, vector.clone());
    loop {
        let score: f64 = (1..=n).map(|j| oracle_score(doc, j, vector[j - 1], theta, true)).product();
        if score >= best.0 {
            best = (score, vector.clone());
        }
        // odometer over c_j in 0..j, last position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return best.1;
            }
            pos -= 1;
            vector[pos] += 1;
            if vector[pos] <= pos {
                break;
            }
            vector[pos] = 0;
        }
    }
}

/// Best total similarity over all injective alignments, by enumeration.
pub fn brute_force_alignment(weights: &[Vec<f64>]) -> f64 {
    fn go(weights: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
        if row == weights.len() {
            return 0.0;
        }
        // leaving a row unmatched is allowed when rows outnumber columns
        let mut best = go(weights, row + 1, used);
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                best = best.max(weights[row][c] + go(weights, row + 1, used));
                used[c] = false;
            }
        }
        best
    }
    let cols = weights.first().map_or(0, Vec::len);
    go(weights, 0, &mut vec![false; cols])
}

/// Random partition over mentions `0..universe` (sentence 0), each mention
/// kept with probability `keep`, into at most `max_chains` chains.
pub fn random_partition(rng: &mut ChaCha8Rng, universe: usize, max_chains: usize, keep: f64) -> Partition {
    let mut chains = vec![Vec::new(); max_chains];
    for i in 0..universe {
        if rng.gen_bool(keep) {
            chains[rng.gen_range(0..max_chains)].push(Span::new(0, i, i));
        }
    }
    Partition::new(chains).expect("disjoint by construction")
}

/// Every recall/precision/F1 within [0, 1].
pub fn in_unit(s: &coref_em::metrics::Score<f64>) -> bool {
    [s.recall, s.precision, s.f1].iter().all(|x| (0.0..=1.0 + 1e-12).contains(x))
}
