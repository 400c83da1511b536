use std::fmt;
use std::io::Write as _;
use std::path::Path;

use coref_em::corpus::LoadError;
use coref_em::model::ModelIoError;
use coref_em::pipeline::UnmatchedDocuments;

/// An error with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub const OTHER: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const VERSION: u8 = 3;
    pub const UNMATCHED: u8 = 4;

    pub fn input(message: impl fmt::Display) -> Self {
        Failure {
            code: Self::INPUT,
            error: anyhow::anyhow!("{message}"),
        }
    }

    pub fn other(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: Self::OTHER,
            error: error.into(),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure {
            code: Self::INPUT,
            error: e.into(),
        }
    }
}

impl From<ModelIoError> for Failure {
    fn from(e: ModelIoError) -> Self {
        let code = match e {
            ModelIoError::Version { .. } | ModelIoError::Representation { .. } => Self::VERSION,
            ModelIoError::Io { .. } | ModelIoError::Format { .. } => Self::INPUT,
        };
        Failure { code, error: e.into() }
    }
}

impl From<UnmatchedDocuments> for Failure {
    fn from(e: UnmatchedDocuments) -> Self {
        Failure {
            code: Self::UNMATCHED,
            error: e.into(),
        }
    }
}

/// Fails with exit code 2 naming the first path that is not a readable file.
pub fn require_files<'a>(paths: impl IntoIterator<Item = &'a Path>) -> Result<(), Failure> {
    for p in paths {
        if !p.is_file() {
            return Err(Failure::input(format!("no such file: {}", p.display())));
        }
    }
    Ok(())
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::input(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
