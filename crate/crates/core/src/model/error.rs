use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("document {doc:?}, mention {mention}: every antecedent has zero probability")]
    DegenerateRow { doc: String, mention: usize },
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("invalid training configuration: {0}")]
    Config(String),
}

#[derive(Debug, thiserror::Error)]
pub enum ModelIoError {
    #[error("cannot access model file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unsupported model format {found:?}")]
    Version { found: String },
    #[error("model uses representation version {found}, this build expects {expected}")]
    Representation { found: String, expected: u32 },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}
