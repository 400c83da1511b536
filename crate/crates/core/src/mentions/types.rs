use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus::Span;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} value {value:?}")]
pub struct UnknownLabel {
    pub kind: &'static str,
    pub value: String,
}

/// Closed label sets with a dense index and a canonical spelling.
macro_rules! labels {
    ($(#[$meta:meta])* $name:ident, $kind:literal { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn index(self) -> usize {
                self as usize
            }

            pub fn from_index(i: usize) -> Option<Self> {
                Self::ALL.get(i).copied()
            }

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = UnknownLabel;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(UnknownLabel { kind: $kind, value: s.to_string() }),
                }
            }
        }
    };
}

labels!(MentionType, "mention type" {
    Proper => "Proper",
    Nominal => "Nominal",
    Pronoun => "Pronoun",
});

labels!(Number, "number" {
    Singular => "Singular",
    Plural => "Plural",
    Unknown => "Unknown",
});

labels!(Gender, "gender" {
    Male => "Male",
    Female => "Female",
    Neutral => "Neutral",
    Unknown => "Unknown",
});

labels!(Person, "person" {
    First => "First",
    Second => "Second",
    Third => "Third",
    Unknown => "Unknown",
});

labels!(Animacy, "animacy" {
    Animate => "Animate",
    Inanimate => "Inanimate",
    Unknown => "Unknown",
});

labels!(SemClass, "semantic class" {
    Person => "Person",
    Organization => "Organization",
    Gpe => "GPE",
    Date => "Date",
    Object => "Object",
    Event => "Event",
    Unknown => "Unknown",
});

labels!(
    /// How a mention's antecedent is resolved: by string matching, by a
    /// precise syntactic or discourse construct, or by attribute agreement.
    ResolutionMode, "mode" {
    Str => "str",
    Prec => "prec",
    Attr => "attr",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AttributeBundle {
    pub number: Number,
    pub gender: Gender,
    pub person: Person,
    pub animacy: Animacy,
    pub semclass: SemClass,
}

impl AttributeBundle {
    pub const UNKNOWN: AttributeBundle = AttributeBundle {
        number: Number::Unknown,
        gender: Gender::Unknown,
        person: Person::Unknown,
        animacy: Animacy::Unknown,
        semclass: SemClass::Unknown,
    };
}

impl Default for AttributeBundle {
    fn default() -> Self {
        AttributeBundle::UNKNOWN
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mention {
    pub span: Span,
    /// Token index of the head word, within the sentence.
    pub head: usize,
    pub mention_type: MentionType,
    pub attributes: AttributeBundle,
    /// Set by mode assignment.
    pub mode: Option<ResolutionMode>,
    pub words: Vec<String>,
    pub pos: Vec<String>,
    /// Lower-cased surface, terminal punctuation stripped.
    pub surface_key: String,
    pub head_key: String,
    /// Entity label covering the mention, if any.
    pub ner: Option<String>,
}

impl Mention {
    pub fn head_word(&self) -> &str {
        &self.words[self.head - self.span.start]
    }

    pub fn head_pos(&self) -> &str {
        &self.pos[self.head - self.span.start]
    }

    pub fn text(&self) -> String {
        self.words.join(" ")
    }

    pub fn is_pronoun(&self) -> bool {
        self.mention_type == MentionType::Pronoun
    }

    /// Document order: sentence, then start, then longer spans first.
    pub fn order_key(&self) -> (usize, usize, std::cmp::Reverse<usize>) {
        order_key(&self.span)
    }

    /// True when `self` strictly precedes `other` in document order.
    pub fn precedes(&self, other: &Mention) -> bool {
        self.order_key() < other.order_key()
    }
}

pub fn order_key(span: &Span) -> (usize, usize, std::cmp::Reverse<usize>) {
    (span.sentence, span.start, std::cmp::Reverse(span.end))
}

/// Either the artificial root m₀ or a real mention.
#[derive(Debug, Clone, Copy)]
pub enum Candidate<'a> {
    Root,
    Mention(&'a Mention),
}

/// Mentions of one document in document order. Index 0 is the implicit
/// root; real mentions are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MentionSequence {
    pub mentions: Vec<Mention>,
}

impl MentionSequence {
    pub fn new(mut mentions: Vec<Mention>) -> Self {
        mentions.sort_by_key(Mention::order_key);
        mentions.dedup_by_key(|m| m.span);
        MentionSequence { mentions }
    }

    /// Number of real mentions (excluding the root).
    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }

    /// Position `j` with 0 meaning the root.
    pub fn candidate(&self, j: usize) -> Candidate<'_> {
        if j == 0 {
            Candidate::Root
        } else {
            Candidate::Mention(&self.mentions[j - 1])
        }
    }

    /// Mention at 1-based position `j`.
    pub fn mention(&self, j: usize) -> &Mention {
        &self.mentions[j - 1]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Mention> {
        self.mentions.iter()
    }

    pub fn mode_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for m in &self.mentions {
            if let Some(mode) = m.mode {
                counts[mode.index()] += 1;
            }
        }
        counts
    }
}
