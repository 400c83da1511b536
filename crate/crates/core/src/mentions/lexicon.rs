//! Word-level attribute lexicons.
//!
//! File format, UTF-8, one entry per line:
//!
//! ```text
//! # comment
//! word<TAB>attribute=value[,attribute=value]
//! ```
//!
//! Attributes are `number`, `gender`, `person`, `animacy`, `semclass` and
//! `demonym` (a `|`-separated list of place names). Words are matched
//! case-insensitively. Later sources override earlier ones attribute by
//! attribute.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::types::{Animacy, AttributeBundle, Gender, Number, Person, SemClass};

const BUNDLED: &str = include_str!("../../data/lexicon.tsv");

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("{source_name}:{line}: {message}")]
    Malformed {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexEntry {
    pub number: Option<Number>,
    pub gender: Option<Gender>,
    pub person: Option<Person>,
    pub animacy: Option<Animacy>,
    pub semclass: Option<SemClass>,
    pub demonym_of: Vec<String>,
}

impl LexEntry {
    fn merge(&mut self, other: &LexEntry) {
        self.number = other.number.or(self.number);
        self.gender = other.gender.or(self.gender);
        self.person = other.person.or(self.person);
        self.animacy = other.animacy.or(self.animacy);
        self.semclass = other.semclass.or(self.semclass);
        if !other.demonym_of.is_empty() {
            self.demonym_of = other.demonym_of.clone();
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LexiconSet {
    entries: HashMap<String, LexEntry>,
}

impl LexiconSet {
    /// An empty set: only the built-in pronoun table applies.
    pub fn empty() -> Self {
        LexiconSet::default()
    }

    /// The minimal lexicon shipped with the crate.
    pub fn bundled() -> Self {
        let mut set = LexiconSet::empty();
        set.merge_text("bundled", BUNDLED)
            .expect("bundled lexicon is well formed");
        set
    }

    /// Bundled entries with each file merged over them in order.
    pub fn with_files<P: AsRef<Path>>(paths: &[P]) -> Result<Self, LexiconError> {
        let mut set = LexiconSet::bundled();
        for path in paths {
            let path = path.as_ref();
            let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            set.merge_text(&path.display().to_string(), &text)?;
        }
        Ok(set)
    }

    pub fn merge_text(&mut self, source_name: &str, text: &str) -> Result<(), LexiconError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| LexiconError::Malformed {
                source_name: source_name.to_string(),
                line: i + 1,
                message,
            };
            let (word, attrs) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected word<TAB>attributes".to_string()))?;
            let word = word.trim().to_lowercase();
            if word.is_empty() {
                return Err(bad("empty word".to_string()));
            }
            let entry = parse_attributes(attrs).map_err(bad)?;
            self.entries.entry(word).or_default().merge(&entry);
        }
        Ok(())
    }

    pub fn insert(&mut self, word: &str, entry: LexEntry) {
        self.entries
            .entry(word.to_lowercase())
            .or_default()
            .merge(&entry);
    }

    pub fn get(&self, word: &str) -> Option<&LexEntry> {
        self.entries.get(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when `demonym` names the people of `place` (either argument
    /// may be a multi-word lower-cased surface).
    pub fn is_demonym_of(&self, demonym: &str, place: &str) -> bool {
        self.get(demonym)
            .is_some_and(|e| e.demonym_of.iter().any(|p| p == place))
    }
}

fn parse_attributes(attrs: &str) -> Result<LexEntry, String> {
    let mut entry = LexEntry::default();
    for pair in attrs.split(',') {
        let pair = pair.trim();
        if pair.is_empty() {
            continue;
        }
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected attribute=value, found {pair:?}"))?;
        let value = value.trim();
        let err = |e: super::types::UnknownLabel| e.to_string();
        match key.trim() {
            "number" => entry.number = Some(value.parse().map_err(err)?),
            "gender" => entry.gender = Some(value.parse().map_err(err)?),
            "person" => entry.person = Some(value.parse().map_err(err)?),
            "animacy" => entry.animacy = Some(value.parse().map_err(err)?),
            "semclass" => entry.semclass = Some(value.parse().map_err(err)?),
            "demonym" => {
                entry.demonym_of = value
                    .split('|')
                    .map(|p| p.trim().to_lowercase())
                    .filter(|p| !p.is_empty())
                    .collect()
            }
            other => return Err(format!("unknown attribute {other:?}")),
        }
    }
    Ok(entry)
}

/// Closed-class pronoun table.
pub fn pronoun_attributes(word: &str) -> Option<AttributeBundle> {
    use Animacy::*;
    use Gender::{Female, Male, Neutral};
    use Number::*;
    use Person::*;
    let lower = word.to_lowercase();
    let (number, gender, person, animacy, semclass) = match lower.as_str() {
        "i" | "me" | "my" | "mine" | "myself" => {
            (Singular, Gender::Unknown, First, Animate, SemClass::Person)
        }
        "we" | "us" | "our" | "ours" | "ourselves" => {
            (Plural, Gender::Unknown, First, Animate, SemClass::Person)
        }
        "you" | "your" | "yours" => (Number::Unknown, Gender::Unknown, Second, Animate, SemClass::Person),
        "yourself" => (Singular, Gender::Unknown, Second, Animate, SemClass::Person),
        "yourselves" => (Plural, Gender::Unknown, Second, Animate, SemClass::Person),
        "he" | "him" | "his" | "himself" => (Singular, Male, Third, Animate, SemClass::Person),
        "she" | "her" | "hers" | "herself" => (Singular, Female, Third, Animate, SemClass::Person),
        "it" | "its" | "itself" => (Singular, Neutral, Third, Inanimate, SemClass::Unknown),
        "they" | "them" | "their" | "theirs" | "themselves" => {
            (Plural, Gender::Unknown, Third, Animacy::Unknown, SemClass::Unknown)
        }
        _ => return None,
    };
    Some(AttributeBundle {
        number,
        gender,
        person,
        animacy,
        semclass,
    })
}

pub fn is_pronoun_word(word: &str) -> bool {
    pronoun_attributes(word).is_some()
}

/// I, me, my, mine, myself.
pub fn is_first_person_singular(word: &str) -> bool {
    matches!(
        word.to_lowercase().as_str(),
        "i" | "me" | "my" | "mine" | "myself"
    )
}

pub fn is_first_person_plural(word: &str) -> bool {
    matches!(
        word.to_lowercase().as_str(),
        "we" | "us" | "our" | "ours" | "ourselves"
    )
}
