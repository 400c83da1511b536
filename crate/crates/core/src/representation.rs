//! Discrete keys for the emission table `t` and the distance prior `q`.
//!
//! For a mention `m_j` in mode π and a candidate antecedent `m_k`:
//!
//! | mode | outcome (about `m_j`)                              | conditioning (about `m_k`) |
//! |------|----------------------------------------------------|----------------------------|
//! | prec | mention type                                       | mention type or ROOT       |
//! | str  | type, exact match, relaxed match, head match       | mention type or ROOT       |
//! | attr | type, number, gender, person, animacy, sem. class  | the same tuple or ROOT     |
//!
//! Tuples are joint keys, never factored. Sentence distance only feeds `q`.

use std::fmt;

use serde::Serialize;

use crate::mentions::{
    sieve_relaxed_match, sieve_strict_head_match_a, sieve_string_match, Animacy, AttributeBundle,
    Candidate, Gender, Mention, MentionSequence, MentionType, Number, Person, ResolutionMode,
    SemClass,
};

/// Bumped whenever key spelling or indexing changes.
pub const REPRESENTATION_VERSION: u32 = 1;

pub const ROOT_KEY: &str = "ROOT";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{mode} mode has no {what} key {key:?}")]
pub struct KeyError {
    pub mode: ResolutionMode,
    pub what: &'static str,
    pub key: String,
}

/// Type plus attribute bundle, the joint attr-mode tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AttrTuple {
    pub mention_type: MentionType,
    pub attributes: AttributeBundle,
}

const ATTR_RADIX: [usize; 6] = [3, 3, 4, 4, 3, 7];

impl AttrTuple {
    pub const COUNT: usize = 3 * 3 * 4 * 4 * 3 * 7;

    pub fn of(m: &Mention) -> Self {
        AttrTuple {
            mention_type: m.mention_type,
            attributes: m.attributes,
        }
    }

    fn digits(&self) -> [usize; 6] {
        let a = &self.attributes;
        [
            self.mention_type.index(),
            a.number.index(),
            a.gender.index(),
            a.person.index(),
            a.animacy.index(),
            a.semclass.index(),
        ]
    }

    pub fn index(&self) -> usize {
        self.digits()
            .iter()
            .zip(ATTR_RADIX)
            .fold(0, |acc, (&d, r)| acc * r + d)
    }

    pub fn from_index(mut i: usize) -> Option<Self> {
        if i >= Self::COUNT {
            return None;
        }
        let mut d = [0usize; 6];
        for k in (0..6).rev() {
            d[k] = i % ATTR_RADIX[k];
            i /= ATTR_RADIX[k];
        }
        Some(AttrTuple {
            mention_type: MentionType::from_index(d[0])?,
            attributes: AttributeBundle {
                number: Number::from_index(d[1])?,
                gender: Gender::from_index(d[2])?,
                person: Person::from_index(d[3])?,
                animacy: Animacy::from_index(d[4])?,
                semclass: SemClass::from_index(d[5])?,
            },
        })
    }

    fn parse(s: &str) -> Option<Self> {
        let f: Vec<&str> = s.split(',').collect();
        if f.len() != 6 {
            return None;
        }
        Some(AttrTuple {
            mention_type: f[0].parse().ok()?,
            attributes: AttributeBundle {
                number: f[1].parse().ok()?,
                gender: f[2].parse().ok()?,
                person: f[3].parse().ok()?,
                animacy: f[4].parse().ok()?,
                semclass: f[5].parse().ok()?,
            },
        })
    }
}

impl fmt::Display for AttrTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.attributes;
        write!(
            f,
            "{},{},{},{},{},{}",
            self.mention_type, a.number, a.gender, a.person, a.animacy, a.semclass
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StrOutcome {
    pub mention_type: MentionType,
    pub exact: bool,
    pub relaxed: bool,
    pub head: bool,
}

impl StrOutcome {
    pub const COUNT: usize = 24;

    pub fn index(&self) -> usize {
        self.mention_type.index() * 8
            + usize::from(self.exact) * 4
            + usize::from(self.relaxed) * 2
            + usize::from(self.head)
    }

    pub fn from_index(i: usize) -> Option<Self> {
        (i < Self::COUNT).then(|| StrOutcome {
            mention_type: MentionType::ALL[i / 8],
            exact: i & 4 != 0,
            relaxed: i & 2 != 0,
            head: i & 1 != 0,
        })
    }
}

impl fmt::Display for StrOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.mention_type, self.exact, self.relaxed, self.head)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Outcome {
    Prec(MentionType),
    Str(StrOutcome),
    Attr(AttrTuple),
}

impl Outcome {
    pub fn mode(&self) -> ResolutionMode {
        match self {
            Outcome::Prec(_) => ResolutionMode::Prec,
            Outcome::Str(_) => ResolutionMode::Str,
            Outcome::Attr(_) => ResolutionMode::Attr,
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Outcome::Prec(t) => t.index(),
            Outcome::Str(s) => s.index(),
            Outcome::Attr(a) => a.index(),
        }
    }

    pub fn from_index(mode: ResolutionMode, i: usize) -> Option<Self> {
        match mode {
            ResolutionMode::Prec => MentionType::from_index(i).map(Outcome::Prec),
            ResolutionMode::Str => StrOutcome::from_index(i).map(Outcome::Str),
            ResolutionMode::Attr => AttrTuple::from_index(i).map(Outcome::Attr),
        }
    }

    pub fn parse(mode: ResolutionMode, s: &str) -> Result<Self, KeyError> {
        let err = || KeyError {
            mode,
            what: "outcome",
            key: s.to_string(),
        };
        match mode {
            ResolutionMode::Prec => s.parse().map(Outcome::Prec).map_err(|_| err()),
            ResolutionMode::Str => {
                let f: Vec<&str> = s.split(',').collect();
                if f.len() != 4 {
                    return Err(err());
                }
                let b = |x: &str| x.parse::<bool>().map_err(|_| err());
                Ok(Outcome::Str(StrOutcome {
                    mention_type: f[0].parse().map_err(|_| err())?,
                    exact: b(f[1])?,
                    relaxed: b(f[2])?,
                    head: b(f[3])?,
                }))
            }
            ResolutionMode::Attr => AttrTuple::parse(s).map(Outcome::Attr).ok_or_else(err),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Prec(t) => write!(f, "{t}"),
            Outcome::Str(s) => write!(f, "{s}"),
            Outcome::Attr(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Conditioning {
    Root,
    Type(MentionType),
    Attr(AttrTuple),
}

impl Conditioning {
    /// Root is index 0 in every mode.
    pub fn index(&self) -> usize {
        match self {
            Conditioning::Root => 0,
            Conditioning::Type(t) => 1 + t.index(),
            Conditioning::Attr(a) => 1 + a.index(),
        }
    }

    pub fn from_index(mode: ResolutionMode, i: usize) -> Option<Self> {
        if i == 0 {
            return Some(Conditioning::Root);
        }
        match mode {
            ResolutionMode::Attr => AttrTuple::from_index(i - 1).map(Conditioning::Attr),
            _ => MentionType::from_index(i - 1).map(Conditioning::Type),
        }
    }

    pub fn parse(mode: ResolutionMode, s: &str) -> Result<Self, KeyError> {
        if s == ROOT_KEY {
            return Ok(Conditioning::Root);
        }
        let err = || KeyError {
            mode,
            what: "conditioning",
            key: s.to_string(),
        };
        match mode {
            ResolutionMode::Attr => AttrTuple::parse(s).map(Conditioning::Attr).ok_or_else(err),
            _ => s.parse().map(Conditioning::Type).map_err(|_| err()),
        }
    }
}

impl fmt::Display for Conditioning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conditioning::Root => f.write_str(ROOT_KEY),
            Conditioning::Type(t) => write!(f, "{t}"),
            Conditioning::Attr(a) => write!(f, "{a}"),
        }
    }
}

/// The `(conditioning, outcome)` pair a `t` entry is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MentionCode {
    pub mode: ResolutionMode,
    pub outcome: Outcome,
    pub conditioning: Conditioning,
}

pub fn outcome_count(mode: ResolutionMode) -> usize {
    match mode {
        ResolutionMode::Prec => MentionType::ALL.len(),
        ResolutionMode::Str => StrOutcome::COUNT,
        ResolutionMode::Attr => AttrTuple::COUNT,
    }
}

/// Includes ROOT.
pub fn conditioning_count(mode: ResolutionMode) -> usize {
    match mode {
        ResolutionMode::Attr => AttrTuple::COUNT + 1,
        _ => MentionType::ALL.len() + 1,
    }
}

/// Every conditioning key and every outcome key of a mode.
pub fn vocabularies(mode: ResolutionMode) -> (Vec<Conditioning>, Vec<Outcome>) {
    let conds = (0..conditioning_count(mode))
        .map(|i| Conditioning::from_index(mode, i).expect("index in range"))
        .collect();
    let outcomes = (0..outcome_count(mode))
        .map(|i| Outcome::from_index(mode, i).expect("index in range"))
        .collect();
    (conds, outcomes)
}

/// Encodes `m_j` against candidate `m_k` under `mode`.
pub fn encode(m_j: &Mention, m_k: Candidate<'_>, mode: ResolutionMode) -> MentionCode {
    let (outcome, conditioning) = match mode {
        ResolutionMode::Prec => (
            Outcome::Prec(m_j.mention_type),
            match m_k {
                Candidate::Root => Conditioning::Root,
                Candidate::Mention(k) => Conditioning::Type(k.mention_type),
            },
        ),
        ResolutionMode::Str => match m_k {
            Candidate::Root => (
                Outcome::Str(StrOutcome {
                    mention_type: m_j.mention_type,
                    exact: false,
                    relaxed: false,
                    head: false,
                }),
                Conditioning::Root,
            ),
            Candidate::Mention(k) => (
                Outcome::Str(StrOutcome {
                    mention_type: m_j.mention_type,
                    exact: sieve_string_match(m_j, k),
                    relaxed: sieve_relaxed_match(m_j, k),
                    head: sieve_strict_head_match_a(m_j, k),
                }),
                Conditioning::Type(k.mention_type),
            ),
        },
        ResolutionMode::Attr => (
            Outcome::Attr(AttrTuple::of(m_j)),
            match m_k {
                Candidate::Root => Conditioning::Root,
                Candidate::Mention(k) => Conditioning::Attr(AttrTuple::of(k)),
            },
        ),
    };
    MentionCode {
        mode,
        outcome,
        conditioning,
    }
}

/// A bucket of sentence distance, or the root candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DistanceBucket {
    Distance(u8),
    Root,
}

/// Sentence-distance bucketing. `lower_bounds` starts at 0 and is strictly
/// increasing; the last bucket is open-ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BucketScheme {
    lower_bounds: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid bucket boundaries {0:?}: must start at 0 and strictly increase")]
pub struct BadBuckets(pub Vec<usize>);

impl Default for BucketScheme {
    /// Buckets 0, 1, 2, 3 and 4+.
    fn default() -> Self {
        BucketScheme {
            lower_bounds: vec![0, 1, 2, 3, 4],
        }
    }
}

impl BucketScheme {
    pub const SAME: DistanceBucket = DistanceBucket::Distance(0);
    pub const ADJACENT: DistanceBucket = DistanceBucket::Distance(1);

    pub fn new(lower_bounds: Vec<usize>) -> Result<Self, BadBuckets> {
        let ok = lower_bounds.first() == Some(&0)
            && lower_bounds.windows(2).all(|w| w[0] < w[1])
            && lower_bounds.len() < u8::MAX as usize;
        if ok {
            Ok(BucketScheme { lower_bounds })
        } else {
            Err(BadBuckets(lower_bounds))
        }
    }

    pub fn lower_bounds(&self) -> &[usize] {
        &self.lower_bounds
    }

    /// Number of distance buckets plus one for the root.
    pub fn len(&self) -> usize {
        self.lower_bounds.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bucket(&self, distance: usize) -> DistanceBucket {
        let i = self.lower_bounds.partition_point(|&b| b <= distance) - 1;
        DistanceBucket::Distance(i as u8)
    }

    pub fn index(&self, bucket: DistanceBucket) -> usize {
        match bucket {
            DistanceBucket::Distance(i) => i as usize,
            DistanceBucket::Root => self.lower_bounds.len(),
        }
    }

    pub fn from_index(&self, i: usize) -> Option<DistanceBucket> {
        match i.cmp(&self.lower_bounds.len()) {
            std::cmp::Ordering::Less => Some(DistanceBucket::Distance(i as u8)),
            std::cmp::Ordering::Equal => Some(DistanceBucket::Root),
            std::cmp::Ordering::Greater => None,
        }
    }

    /// "0", "1-2", "4+", "ROOT".
    pub fn label(&self, bucket: DistanceBucket) -> String {
        match bucket {
            DistanceBucket::Root => ROOT_KEY.to_string(),
            DistanceBucket::Distance(i) => {
                let i = i as usize;
                let lo = self.lower_bounds[i];
                match self.lower_bounds.get(i + 1) {
                    None => format!("{lo}+"),
                    Some(&next) if next == lo + 1 => lo.to_string(),
                    Some(&next) => format!("{lo}-{}", next - 1),
                }
            }
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len())
            .map(|i| self.label(self.from_index(i).unwrap()))
            .collect()
    }

    /// Rebuilds a scheme from its labels in index order (ROOT last).
    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Option<Self> {
        let (last, distances) = labels.split_last()?;
        if last.as_ref() != ROOT_KEY || distances.is_empty() {
            return None;
        }
        let mut bounds = Vec::with_capacity(distances.len());
        for (i, l) in distances.iter().enumerate() {
            let l = l.as_ref();
            let lo = l
                .strip_suffix('+')
                .filter(|_| i + 1 == distances.len())
                .unwrap_or_else(|| l.split('-').next().unwrap_or(l));
            bounds.push(lo.parse().ok()?);
        }
        let scheme = BucketScheme::new(bounds).ok()?;
        (scheme.labels() == labels.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>())
            .then_some(scheme)
    }

    pub fn distance_between(&self, m_j: &Mention, m_k: Candidate<'_>) -> DistanceBucket {
        match m_k {
            Candidate::Root => DistanceBucket::Root,
            Candidate::Mention(k) => self.bucket(m_j.span.sentence.abs_diff(k.span.sentence)),
        }
    }
}

/// Sentence distance under the default buckets.
pub fn sentence_distance(m_j: &Mention, m_k: Candidate<'_>) -> DistanceBucket {
    BucketScheme::default().distance_between(m_j, m_k)
}

/// One candidate antecedent of an encoded mention, as dense indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CandidateCode {
    pub conditioning: u16,
    pub outcome: u16,
    pub bucket: u8,
}

/// Mention `j` (1-based) with its `j` candidates, root first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodedMention {
    pub mode: ResolutionMode,
    pub candidates: Vec<CandidateCode>,
}

/// A document reduced to what the model needs. Encoding once and reusing
/// it across EM iterations keeps the sieves out of the inner loop.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EncodedDocument {
    pub doc_id: String,
    pub mentions: Vec<EncodedMention>,
}

impl EncodedDocument {
    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }
}

/// Encodes every (mention, candidate) pair. Modes must already be set.
pub fn encode_document(doc_id: &str, ms: &MentionSequence, scheme: &BucketScheme) -> EncodedDocument {
    let mentions = (1..=ms.len())
        .map(|j| {
            let m_j = ms.mention(j);
            let mode = m_j.mode.expect("modes are assigned before encoding");
            let candidates = (0..j)
                .map(|k| {
                    let cand = ms.candidate(k);
                    let code = encode(m_j, cand, mode);
                    CandidateCode {
                        conditioning: code.conditioning.index() as u16,
                        outcome: code.outcome.index() as u16,
                        bucket: scheme.index(scheme.distance_between(m_j, cand)) as u8,
                    }
                })
                .collect();
            EncodedMention { mode, candidates }
        })
        .collect();
    EncodedDocument {
        doc_id: doc_id.to_string(),
        mentions,
    }
}
