use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use coref_em::corpus::{emit_corpus, load_corpus, LoadOptions, Partition};
use coref_em::mentions::{LexiconSet, ModePrecedence, ResolutionMode};
use coref_em::metrics::score_corpus;
use coref_em::model::{
    load_model, model_to_string, train_em, DevEvaluator, ModelError, ParameterTables, TrainConfig,
    TrainOutcome, DEFAULT_EPSILON,
};
use coref_em::pipeline::{
    align_documents, analyze_corpus, evaluate, posteriors, resolve, Analysis, PipelineConfig,
};
use coref_em::representation::BucketScheme;
use serde::Serialize;

use crate::args::{Format, InspectArgs, Precedence, ResolveArgs, ScoreArgs, Shared, TrainArgs};
use crate::config::{pick, switch, FileConfig};
use crate::failure::{require_files, write_atomic, Failure};

/// Shared options after merging flags over the config file.
pub struct Settings {
    pub workers: usize,
    pub lexicons: LexiconSet,
    pub format: Format,
    pub file: FileConfig,
}

impl Settings {
    pub fn resolve(shared: &Shared) -> Result<Self, Failure> {
        let file = match &shared.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let lexicon_paths = if shared.lexicons.is_empty() {
            &file.lexicons
        } else {
            &shared.lexicons
        };
        require_files(lexicon_paths.iter().map(PathBuf::as_path))?;
        let lexicons = LexiconSet::with_files(lexicon_paths).map_err(Failure::input)?;
        Ok(Settings {
            workers: pick(shared.workers, file.workers, 1) as usize,
            lexicons,
            format: pick(shared.format, file.format, Format::Text),
            file,
        })
    }

    fn pipeline(&self, precedence: Option<Precedence>, min_chain_size: usize) -> PipelineConfig {
        let precedence = match pick(precedence, self.file.precedence, Precedence::StrFirst) {
            Precedence::StrFirst => ModePrecedence::StrFirst,
            Precedence::PrecFirst => ModePrecedence::PrecFirst,
        };
        PipelineConfig {
            lexicons: self.lexicons.clone(),
            precedence,
            buckets: BucketScheme::default(),
            min_chain_size,
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Failure> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(Failure::other)
    }
}

fn model_error(e: ModelError) -> Failure {
    match e {
        ModelError::EmptyCorpus | ModelError::Config(_) => Failure::input(e),
        ModelError::DegenerateRow { .. } => Failure::other(e),
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn trace_tsv(outcome: &TrainOutcome<f64>, with_dev: bool) -> String {
    let mut out = String::from("iteration\tloglik");
    if with_dev {
        out.push_str("\tdev_conll_f1");
    }
    out.push_str("\tselected\n");
    for rec in &outcome.trace {
        let _ = write!(out, "{}\t{:.6}", rec.iteration, rec.loglik);
        if let Some(f1) = rec.dev_f1 {
            let _ = write!(out, "\t{f1:.6}");
        }
        let mark = if rec.iteration == outcome.selected_iteration { "*" } else { "" };
        let _ = writeln!(out, "\t{mark}");
    }
    out
}

#[derive(Serialize)]
struct TrainSummary {
    documents: usize,
    skipped_short: usize,
    skipped_duplicate: usize,
    mentions: usize,
    iterations: usize,
    selected_iteration: usize,
    initial_loglik: f64,
    final_loglik: f64,
    model: String,
    trace: String,
}

pub fn train(s: &Settings, a: &TrainArgs) -> Result<String, Failure> {
    require_files(a.inputs.iter().chain(&a.dev).map(PathBuf::as_path))?;
    let iterations = pick(a.iterations, s.file.iterations, 10) as usize;
    let epsilon = pick(a.epsilon, s.file.epsilon, DEFAULT_EPSILON);
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Failure::input(format!("epsilon {epsilon} is not in [0, 1)")));
    }
    let options = LoadOptions {
        min_sentences: Some(pick(a.min_sentences, s.file.min_sentences, 3)),
        dedup: !a.no_dedup && s.file.dedup.unwrap_or(true),
    };
    let corpus = load_corpus(&a.inputs, &options)?;
    let pipeline = s.pipeline(a.analysis.precedence, 2);
    let pool = s.pool()?;
    let encoded: Vec<_> = analyze_corpus(&corpus.documents, &pipeline, &pool)
        .into_iter()
        .map(|x| x.encoded)
        .collect();

    let dev_docs = if a.dev.is_empty() {
        Vec::new()
    } else {
        load_corpus(&a.dev, &LoadOptions::default())?.documents
    };
    let dev_analyses = analyze_corpus(&dev_docs, &pipeline, &pool);
    let dev_f1 = |theta: &ParameterTables<f64>| evaluate(&dev_docs, &dev_analyses, theta, 2).conll;
    let dev: Option<DevEvaluator<'_, f64>> = if dev_docs.is_empty() { None } else { Some(&dev_f1) };

    let config = TrainConfig {
        iterations,
        epsilon,
        workers: s.workers,
        buckets: BucketScheme::default(),
        keep_iterations: a.keep_iterations,
    };
    let outcome = train_em::<f64>(&encoded, &config, dev).map_err(model_error)?;

    let trace_path = a.trace.clone().unwrap_or_else(|| sibling(&a.model, ".trace.tsv"));
    for (i, theta) in outcome.iterations.iter().enumerate() {
        write_atomic(&sibling(&a.model, &format!(".iter{}", i + 1)), &model_to_string(theta))?;
    }
    write_atomic(&trace_path, &trace_tsv(&outcome, dev.is_some()))?;
    write_atomic(&a.model, &model_to_string(&outcome.selected))?;

    let summary = TrainSummary {
        documents: corpus.len(),
        skipped_short: corpus.skipped_short,
        skipped_duplicate: corpus.skipped_duplicate,
        mentions: encoded.iter().map(|d| d.len()).sum(),
        iterations,
        selected_iteration: outcome.selected_iteration,
        initial_loglik: outcome.initial_loglik,
        final_loglik: outcome.trace.last().map_or(f64::NAN, |r| r.loglik),
        model: a.model.display().to_string(),
        trace: trace_path.display().to_string(),
    };
    Ok(match s.format {
        Format::Json => json(&summary)?,
        Format::Text => format!(
            "trained on {} documents ({} mentions; skipped {} short, {} duplicate)\n\
             log-likelihood {:.3} -> {:.3} over {} iterations; selected iteration {}\n\
             model {}\ntrace {}\n",
            summary.documents,
            summary.mentions,
            summary.skipped_short,
            summary.skipped_duplicate,
            summary.initial_loglik,
            summary.final_loglik,
            summary.iterations,
            summary.selected_iteration,
            summary.model,
            summary.trace,
        ),
    })
}

fn json(value: &impl Serialize) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(Failure::other)?;
    s.push('\n');
    Ok(s)
}

/// Returns the CoNLL text; the caller prints it unless it went to a file.
pub fn resolve_cmd(s: &Settings, a: &ResolveArgs) -> Result<Option<String>, Failure> {
    require_files(a.inputs.iter().chain([&a.model]).map(PathBuf::as_path))?;
    let theta: ParameterTables<f64> = load_model(&a.model)?;
    let docs = load_corpus(&a.inputs, &LoadOptions::default())?.documents;
    let min_chain_size = if switch(a.singletons, s.file.singletons, false) { 1 } else { 2 };
    let pipeline = s.pipeline(a.analysis.precedence, min_chain_size);
    let analyses = analyze_corpus(&docs, &pipeline, &s.pool()?);
    let partitions: Vec<Partition> = analyses
        .iter()
        .map(|x| resolve(x, &theta, min_chain_size))
        .collect();
    let text = emit_corpus(docs.iter().zip(&partitions)).map_err(Failure::other)?;
    match &a.output {
        Some(path) => {
            write_atomic(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

#[derive(Serialize)]
struct ScoreRow {
    metric: &'static str,
    recall: f64,
    precision: f64,
    f1: f64,
}

pub fn score(s: &Settings, a: &ScoreArgs) -> Result<String, Failure> {
    require_files([a.key.as_path(), a.response.as_path()])?;
    let key = load_corpus(&[&a.key], &LoadOptions::default())?.documents;
    let response = load_corpus(&[&a.response], &LoadOptions::default())?.documents;
    let pairs = align_documents(&key, &response)?;
    let empty = Partition::empty();
    let table = score_corpus::<f64>(pairs.iter().map(|(k, r)| {
        (
            k.gold_chains.as_ref().unwrap_or(&empty),
            r.gold_chains.as_ref().unwrap_or(&empty),
        )
    }));
    let percent = switch(a.percent, s.file.percent, false);
    Ok(match s.format {
        Format::Text => table.render(percent),
        Format::Json => {
            let scale = if percent { 100.0 } else { 1.0 };
            let mut rows: Vec<ScoreRow> = table
                .rows()
                .iter()
                .map(|(metric, sc)| ScoreRow {
                    metric,
                    recall: sc.recall * scale,
                    precision: sc.precision * scale,
                    f1: sc.f1 * scale,
                })
                .collect();
            rows.push(ScoreRow {
                metric: "CoNLL",
                recall: f64::NAN,
                precision: f64::NAN,
                f1: table.conll * scale,
            });
            json(&rows)?
        }
    })
}

#[derive(Serialize)]
struct AntecedentDump {
    /// 0 is ROOT; otherwise the 1-based mention index.
    index: usize,
    text: String,
    probability: f64,
}

#[derive(Serialize)]
struct MentionDump {
    index: usize,
    sentence: usize,
    start: usize,
    end: usize,
    text: String,
    head: String,
    mention_type: String,
    number: String,
    gender: String,
    person: String,
    animacy: String,
    semclass: String,
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    antecedents: Option<Vec<AntecedentDump>>,
}

#[derive(Serialize)]
struct DocumentDump {
    document: String,
    mode_counts: ModeCounts,
    mentions: Vec<MentionDump>,
}

#[derive(Serialize)]
struct ModeCounts {
    str: usize,
    prec: usize,
    attr: usize,
}

fn dump(analysis: &Analysis, theta: Option<&ParameterTables<f64>>, top: usize) -> Result<DocumentDump, Failure> {
    let ms = &analysis.mentions;
    let rows = match theta {
        Some(t) => Some(posteriors(analysis, t).map_err(Failure::other)?),
        None => None,
    };
    let counts = ms.mode_counts();
    let at = |m: ResolutionMode| counts[m.index()];
    let mentions = ms
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let antecedents = rows.as_ref().map(|rows| {
                let mut ranked: Vec<(usize, f64)> = rows[i].weights.iter().copied().enumerate().collect();
                // highest first; ties go to the nearer candidate as in decoding
                ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(b.0.cmp(&a.0)));
                ranked
                    .into_iter()
                    .take(top)
                    .map(|(k, p)| AntecedentDump {
                        index: k,
                        text: if k == 0 { "ROOT".into() } else { ms.mention(k).text() },
                        probability: p,
                    })
                    .collect()
            });
            MentionDump {
                index: i + 1,
                sentence: m.span.sentence,
                start: m.span.start,
                end: m.span.end,
                text: m.text(),
                head: m.head_word().to_string(),
                mention_type: m.mention_type.to_string(),
                number: m.attributes.number.to_string(),
                gender: m.attributes.gender.to_string(),
                person: m.attributes.person.to_string(),
                animacy: m.attributes.animacy.to_string(),
                semclass: m.attributes.semclass.to_string(),
                mode: m.mode.map_or_else(|| "-".into(), |x| x.to_string()),
                antecedents,
            }
        })
        .collect();
    Ok(DocumentDump {
        document: analysis.encoded.doc_id.clone(),
        mode_counts: ModeCounts {
            str: at(ResolutionMode::Str),
            prec: at(ResolutionMode::Prec),
            attr: at(ResolutionMode::Attr),
        },
        mentions,
    })
}

fn render_dump(d: &DocumentDump, out: &mut String) {
    let c = &d.mode_counts;
    let _ = writeln!(
        out,
        "# {}: {} mentions (str {}, prec {}, attr {})",
        d.document,
        d.mentions.len(),
        c.str,
        c.prec,
        c.attr
    );
    for m in &d.mentions {
        let _ = writeln!(
            out,
            "{:>4} [{}:{}-{}] {:?} head={} {} {} {} {} {} {} mode={}",
            m.index,
            m.sentence,
            m.start,
            m.end,
            m.text,
            m.head,
            m.mention_type,
            m.number,
            m.gender,
            m.person,
            m.animacy,
            m.semclass,
            m.mode
        );
        for a in m.antecedents.iter().flatten() {
            let who = if a.index == 0 { "ROOT".to_string() } else { format!("{} {:?}", a.index, a.text) };
            let _ = writeln!(out, "       {:.4} {who}", a.probability);
        }
    }
}

pub fn inspect(s: &Settings, a: &InspectArgs) -> Result<String, Failure> {
    require_files(a.inputs.iter().chain(&a.model).map(PathBuf::as_path))?;
    let theta: Option<ParameterTables<f64>> = a.model.as_deref().map(load_model).transpose()?;
    let docs = load_corpus(&a.inputs, &LoadOptions::default())?.documents;
    let pipeline = s.pipeline(a.analysis.precedence, 2);
    let analyses = analyze_corpus(&docs, &pipeline, &s.pool()?);
    let top = pick(a.top, s.file.top, 5);
    let dumps = analyses
        .iter()
        .map(|x| dump(x, theta.as_ref(), top))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match s.format {
        Format::Json => json(&dumps)?,
        Format::Text => {
            let mut out = String::new();
            for d in &dumps {
                render_dump(d, &mut out);
            }
            out
        }
    })
}
