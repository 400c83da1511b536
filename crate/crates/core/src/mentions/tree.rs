//! Constituent trees rebuilt from per-token parse fragments.

use crate::corpus::Sentence;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("token {token}: fragment {fragment:?} has {stars} placeholders, expected 1")]
    Placeholder {
        token: usize,
        fragment: String,
        stars: usize,
    },
    #[error("token {token}: closing bracket without an open constituent")]
    ExtraClose { token: usize },
    #[error("{open} constituents left open at end of sentence")]
    Unclosed { open: usize },
    #[error("token {token}: empty constituent label")]
    EmptyLabel { token: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    pub start: usize,
    pub end: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// A child position inside a constituent: either a phrase or a bare token
/// (preterminals are not materialised as nodes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Item {
    Phrase(usize),
    Token(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    pub nodes: Vec<Node>,
    pub roots: Vec<usize>,
    pub pos: Vec<String>,
}

impl Tree {
    pub fn from_sentence(sentence: &Sentence) -> Result<Tree, TreeError> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut roots = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for (t, token) in sentence.tokens.iter().enumerate() {
            let frag = token.parse_fragment.as_str();
            let stars = frag.matches('*').count();
            if stars != 1 {
                return Err(TreeError::Placeholder {
                    token: t,
                    fragment: frag.to_string(),
                    stars,
                });
            }
            let mut chars = frag.char_indices().peekable();
            while let Some((i, c)) = chars.next() {
                match c {
                    '(' => {
                        let mut label_end = frag.len();
                        while let Some(&(j, d)) = chars.peek() {
                            if matches!(d, '(' | ')' | '*') {
                                label_end = j;
                                break;
                            }
                            chars.next();
                        }
                        let label = frag[i + 1..label_end].trim();
                        if label.is_empty() {
                            return Err(TreeError::EmptyLabel { token: t });
                        }
                        let id = nodes.len();
                        nodes.push(Node {
                            label: label.to_string(),
                            start: t,
                            end: t,
                            parent: stack.last().copied(),
                            children: Vec::new(),
                        });
                        match stack.last() {
                            Some(&p) => nodes[p].children.push(id),
                            None => roots.push(id),
                        }
                        stack.push(id);
                    }
                    ')' => {
                        let id = stack.pop().ok_or(TreeError::ExtraClose { token: t })?;
                        nodes[id].end = t;
                    }
                    _ => {}
                }
            }
        }
        if !stack.is_empty() {
            return Err(TreeError::Unclosed { open: stack.len() });
        }
        Ok(Tree {
            nodes,
            roots,
            pos: sentence.tokens.iter().map(|t| t.pos.clone()).collect(),
        })
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    /// Phrase children and uncovered tokens of `id`, left to right.
    pub fn items(&self, id: usize) -> Vec<Item> {
        let node = &self.nodes[id];
        let mut items = Vec::new();
        let mut t = node.start;
        for &c in &node.children {
            let child = &self.nodes[c];
            while t < child.start {
                items.push(Item::Token(t));
                t += 1;
            }
            items.push(Item::Phrase(c));
            t = child.end + 1;
        }
        while t <= node.end {
            items.push(Item::Token(t));
            t += 1;
        }
        items
    }

    pub fn item_span(&self, item: Item) -> (usize, usize) {
        match item {
            Item::Phrase(id) => (self.nodes[id].start, self.nodes[id].end),
            Item::Token(t) => (t, t),
        }
    }

    /// Nodes with the given label, in pre-order.
    pub fn find_label<'a>(&'a self, label: &'a str) -> impl Iterator<Item = usize> + 'a {
        (0..self.nodes.len()).filter(move |&i| self.nodes[i].label == label)
    }

    /// Lowest NP node (if any) covering exactly `start..=end`.
    pub fn np_with_span(&self, start: usize, end: usize) -> Option<usize> {
        (0..self.nodes.len())
            .rev()
            .find(|&i| {
                let n = &self.nodes[i];
                is_np(&n.label) && n.start == start && n.end == end
            })
    }

    /// Head token of a constituent using NP-oriented head rules.
    pub fn head_of(&self, id: usize) -> usize {
        let items = self.items(id);
        let label = base_label(&self.nodes[id].label);
        let pos_of = |item: Item| match item {
            Item::Token(t) => Some(self.pos[t].as_str()),
            Item::Phrase(_) => None,
        };
        let phrase_label = |item: Item| match item {
            Item::Phrase(p) => Some(base_label(&self.nodes[p].label)),
            Item::Token(_) => None,
        };
        let descend = |item: Item| match item {
            Item::Phrase(p) => self.head_of(p),
            Item::Token(t) => t,
        };
        if label == "NP" || label == "NML" || label == "NX" {
            // rightmost noun-like token
            if let Some(&it) = items.iter().rev().find(|&&it| {
                pos_of(it).is_some_and(|p| {
                    matches!(p, "NN" | "NNS" | "NNP" | "NNPS" | "PRP" | "NX" | "JJR")
                }) || phrase_label(it).is_some_and(|l| l == "NML" || l == "NX")
            }) {
                return descend(it);
            }
            // leftmost NP child
            if let Some(&it) = items
                .iter()
                .find(|&&it| phrase_label(it).is_some_and(|l| l == "NP"))
            {
                return descend(it);
            }
            if let Some(&it) = items.iter().rev().find(|&&it| {
                pos_of(it).is_some_and(|p| p == "$" || p == "CD")
                    || phrase_label(it).is_some_and(|l| l == "ADJP" || l == "PRN" || l == "QP")
            }) {
                return descend(it);
            }
            if let Some(&it) = items.iter().rev().find(|&&it| {
                pos_of(it).is_some_and(|p| matches!(p, "JJ" | "JJS" | "RB" | "PRP$"))
            }) {
                return descend(it);
            }
        }
        // fallback: rightmost non-punctuation item
        let it = items
            .iter()
            .rev()
            .find(|&&it| !pos_of(it).is_some_and(is_punct))
            .or(items.last())
            .copied()
            .expect("constituents cover at least one token");
        descend(it)
    }
}

/// Strips function tags and indices: `NP-SBJ-1` → `NP`.
pub fn base_label(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    label.split(['-', '=']).next().unwrap_or(label)
}

pub fn is_np(label: &str) -> bool {
    base_label(label) == "NP"
}

pub fn is_punct(pos: &str) -> bool {
    matches!(pos, "," | "." | ":" | "``" | "''" | "-LRB-" | "-RRB-" | "HYPH" | "NFP")
}
