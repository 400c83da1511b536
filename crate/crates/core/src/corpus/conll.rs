//! Reader and writer for the CoNLL-2012 `*_conll` column layout.
//!
//! Column order: document id, part number, word number, word, POS, parse
//! bit, predicate lemma, frameset id, word sense, speaker, named entities,
//! zero or more predicate-argument columns, coreference.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::types::{Document, Partition, Passthrough, Sentence, Span, Token};

/// Word number through NER plus the trailing coreference column.
pub const MIN_COLUMNS: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum ConllError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: unbalanced coreference markers for chain {chain}")]
    Chain { line: usize, chain: String },
    #[error("line {line}: {source}")]
    Overlap {
        line: usize,
        source: super::types::OverlappingChains,
    },
    #[error("document {doc}: span {span} lies outside the document")]
    Bounds { doc: String, span: Span },
}

fn format_err(line: usize, message: impl Into<String>) -> ConllError {
    ConllError::Format {
        line,
        message: message.into(),
    }
}

struct DocBuilder {
    doc_id: String,
    part_id: u32,
    begin_line: usize,
    sentences: Vec<Sentence>,
    current: Vec<Token>,
    current_width: Option<usize>,
    saw_coref: bool,
    // chain id -> stack of (sentence, start) for open markers
    open: BTreeMap<String, Vec<(usize, usize, usize)>>,
    chains: BTreeMap<String, Vec<Span>>,
}

impl DocBuilder {
    fn new(doc_id: String, part_id: u32, begin_line: usize) -> Self {
        DocBuilder {
            doc_id,
            part_id,
            begin_line,
            sentences: Vec::new(),
            current: Vec::new(),
            current_width: None,
            saw_coref: false,
            open: BTreeMap::new(),
            chains: BTreeMap::new(),
        }
    }

    fn close_sentence(&mut self, line: usize) -> Result<(), ConllError> {
        if self.current.is_empty() {
            return Ok(());
        }
        // a mention may not cross a sentence boundary
        if let Some((chain, _)) = self.open.iter().find(|(_, v)| !v.is_empty()) {
            return Err(ConllError::Chain {
                line,
                chain: chain.clone(),
            });
        }
        let index = self.sentences.len();
        self.sentences.push(Sentence {
            index,
            tokens: std::mem::take(&mut self.current),
        });
        self.current_width = None;
        Ok(())
    }

    fn push_row(&mut self, line_no: usize, cols: &[&str]) -> Result<(), ConllError> {
        if cols.len() < MIN_COLUMNS {
            return Err(format_err(
                line_no,
                format!(
                    "expected at least {MIN_COLUMNS} columns, found {}",
                    cols.len()
                ),
            ));
        }
        match self.current_width {
            Some(w) if w != cols.len() => {
                return Err(format_err(
                    line_no,
                    format!(
                        "row has {} columns but the sentence started with {w}",
                        cols.len()
                    ),
                ));
            }
            _ => self.current_width = Some(cols.len()),
        }
        let sentence = self.sentences.len();
        let position = self.current.len();
        if let Ok(n) = cols[2].parse::<usize>() {
            if n != position {
                return Err(format_err(
                    line_no,
                    format!("word number {n} but expected {position}"),
                ));
            }
        }
        let dash_empty = |s: &str| if s == "-" { String::new() } else { s.to_string() };
        let last = cols.len() - 1;
        self.current.push(Token {
            surface: cols[3].to_string(),
            pos: cols[4].to_string(),
            parse_fragment: cols[5].to_string(),
            lemma: dash_empty(cols[6]),
            speaker: dash_empty(cols[9]),
            ner: cols[10].to_string(),
            passthrough: Passthrough {
                frameset: cols[7].to_string(),
                word_sense: cols[8].to_string(),
                predicate_args: cols[11..last].iter().map(|s| s.to_string()).collect(),
            },
        });
        self.read_coref(line_no, cols[last], sentence, position)
    }

    fn read_coref(
        &mut self,
        line_no: usize,
        field: &str,
        sentence: usize,
        position: usize,
    ) -> Result<(), ConllError> {
        if field == "-" || field == "_" {
            return Ok(());
        }
        self.saw_coref = true;
        for piece in field.split('|') {
            let opens = piece.starts_with('(');
            let closes = piece.ends_with(')');
            let id = piece.trim_start_matches('(').trim_end_matches(')');
            if id.is_empty() || id.contains(['(', ')']) {
                return Err(format_err(
                    line_no,
                    format!("malformed coreference marker {piece:?}"),
                ));
            }
            match (opens, closes) {
                (true, true) => self.add_span(id, Span::new(sentence, position, position)),
                (true, false) => self
                    .open
                    .entry(id.to_string())
                    .or_default()
                    .push((sentence, position, line_no)),
                (false, true) => {
                    let (s, start, _) = self
                        .open
                        .get_mut(id)
                        .and_then(Vec::pop)
                        .ok_or_else(|| ConllError::Chain {
                            line: line_no,
                            chain: id.to_string(),
                        })?;
                    debug_assert_eq!(s, sentence);
                    self.add_span(id, Span::new(sentence, start, position));
                }
                (false, false) => {
                    return Err(format_err(
                        line_no,
                        format!("malformed coreference marker {piece:?}"),
                    ))
                }
            }
        }
        Ok(())
    }

    fn add_span(&mut self, id: &str, span: Span) {
        self.chains.entry(id.to_string()).or_default().push(span);
    }

    fn finish(mut self, line: usize) -> Result<Document, ConllError> {
        self.close_sentence(line)?;
        let gold_chains = if self.saw_coref {
            Some(
                Partition::new(self.chains.into_values()).map_err(|source| {
                    ConllError::Overlap {
                        line: self.begin_line,
                        source,
                    }
                })?,
            )
        } else {
            None
        };
        Ok(Document {
            doc_id: self.doc_id,
            part_id: self.part_id,
            sentences: self.sentences,
            gold_chains,
        })
    }
}

/// Parses `#begin document (id); part NNN` into its id and part number.
fn parse_begin(line_no: usize, rest: &str) -> Result<(String, u32), ConllError> {
    let rest = rest.trim();
    let (id_part, part_part) = match rest.rfind(';') {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    let id = id_part
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .to_string();
    if id.is_empty() {
        return Err(format_err(line_no, "document header without an id"));
    }
    let part = match part_part {
        Some(p) => {
            let p = p.trim();
            let digits = p.strip_prefix("part").unwrap_or(p).trim();
            digits
                .parse::<u32>()
                .map_err(|_| format_err(line_no, format!("bad part number {p:?}")))?
        }
        None => 0,
    };
    Ok((id, part))
}

/// Parses every `#begin document` block in `text`.
pub fn parse_conll(text: &str) -> Result<Vec<Document>, ConllError> {
    let mut docs = Vec::new();
    let mut builder: Option<DocBuilder> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim_end_matches('\r');
        if let Some(rest) = line.strip_prefix("#begin document") {
            if builder.is_some() {
                return Err(format_err(line_no, "nested #begin document"));
            }
            let (id, part) = parse_begin(line_no, rest)?;
            builder = Some(DocBuilder::new(id, part, line_no));
        } else if line.starts_with("#end document") {
            let b = builder
                .take()
                .ok_or_else(|| format_err(line_no, "#end document without #begin"))?;
            docs.push(b.finish(line_no)?);
        } else if line.starts_with('#') {
            continue;
        } else if line.trim().is_empty() {
            if let Some(b) = builder.as_mut() {
                b.close_sentence(line_no)?;
            }
        } else {
            let b = builder
                .as_mut()
                .ok_or_else(|| format_err(line_no, "token row outside a document"))?;
            let cols: Vec<&str> = line.split_whitespace().collect();
            b.push_row(line_no, &cols)?;
        }
    }
    if builder.is_some() {
        return Err(format_err(last_line, "missing #end document"));
    }
    Ok(docs)
}

/// Coreference column contents for every token of `doc` under `partition`.
/// Chains are numbered in partition order.
fn coref_columns(doc: &Document, partition: &Partition) -> Result<Vec<Vec<String>>, ConllError> {
    struct Marker {
        chain: usize,
        span: Span,
    }
    let mut columns: Vec<Vec<String>> = doc
        .sentences
        .iter()
        .map(|s| vec![String::new(); s.len()])
        .collect();
    // opening, single-token and closing markers on one token
    type TokenMarkers = (Vec<Marker>, Vec<Marker>, Vec<Marker>);
    let mut per_token: BTreeMap<(usize, usize), TokenMarkers> = BTreeMap::new();
    for (chain, spans) in partition.chains().iter().enumerate() {
        for span in spans {
            if !doc.contains(span) {
                return Err(ConllError::Bounds {
                    doc: doc.doc_id.clone(),
                    span: *span,
                });
            }
            let m = || Marker { chain, span: *span };
            if span.start == span.end {
                per_token
                    .entry((span.sentence, span.start))
                    .or_default()
                    .1
                    .push(m());
            } else {
                per_token
                    .entry((span.sentence, span.start))
                    .or_default()
                    .0
                    .push(m());
                per_token
                    .entry((span.sentence, span.end))
                    .or_default()
                    .2
                    .push(m());
            }
        }
    }
    for ((s, t), (mut opens, singles, mut closes)) in per_token {
        // longer spans open first; spans that opened last close first
        opens.sort_by(|a, b| b.span.end.cmp(&a.span.end).then(a.chain.cmp(&b.chain)));
        closes.sort_by(|a, b| b.span.start.cmp(&a.span.start).then(a.chain.cmp(&b.chain)));
        let mut pieces = Vec::new();
        pieces.extend(opens.iter().map(|m| format!("({}", m.chain)));
        pieces.extend(singles.iter().map(|m| format!("({})", m.chain)));
        pieces.extend(closes.iter().map(|m| format!("{})", m.chain)));
        columns[s][t] = pieces.join("|");
    }
    Ok(columns)
}

/// Writes one document with `partition` in the coreference column.
pub fn emit_conll(doc: &Document, partition: &Partition) -> Result<String, ConllError> {
    let coref = coref_columns(doc, partition)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "#begin document ({}); part {:03}",
        doc.doc_id, doc.part_id
    );
    let or_dash = |s: &str| if s.is_empty() { "-".to_string() } else { s.to_string() };
    for (s, sentence) in doc.sentences.iter().enumerate() {
        for (t, tok) in sentence.tokens.iter().enumerate() {
            let mut cols: Vec<String> = vec![
                doc.doc_id.clone(),
                doc.part_id.to_string(),
                t.to_string(),
                tok.surface.clone(),
                tok.pos.clone(),
                tok.parse_fragment.clone(),
                or_dash(&tok.lemma),
                or_dash(&tok.passthrough.frameset),
                or_dash(&tok.passthrough.word_sense),
                or_dash(&tok.speaker),
                or_dash(&tok.ner),
            ];
            cols.extend(tok.passthrough.predicate_args.iter().cloned());
            cols.push(or_dash(&coref[s][t]));
            out.push_str(&cols.join("\t"));
            out.push('\n');
        }
        out.push('\n');
    }
    out.push_str("#end document\n");
    Ok(out)
}

/// Writes every document with its paired partition.
pub fn emit_corpus<'a, I>(pairs: I) -> Result<String, ConllError>
where
    I: IntoIterator<Item = (&'a Document, &'a Partition)>,
{
    let mut out = String::new();
    for (doc, partition) in pairs {
        out.push_str(&emit_conll(doc, partition)?);
    }
    Ok(out)
}
