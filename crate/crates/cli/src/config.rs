//! Optional TOML defaults. Any flag given on the command line wins.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{Format, Precedence};
use crate::failure::Failure;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub workers: Option<u32>,
    #[serde(default)]
    pub lexicons: Vec<PathBuf>,
    pub format: Option<Format>,
    pub iterations: Option<u32>,
    pub epsilon: Option<f64>,
    pub dedup: Option<bool>,
    pub min_sentences: Option<usize>,
    pub singletons: Option<bool>,
    pub precedence: Option<Precedence>,
    pub percent: Option<bool>,
    pub top: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read config {}: {e}", path.display())))?;
        let config: FileConfig = toml::from_str(&text)
            .map_err(|e| Failure::input(format!("config {}: {e}", path.display())))?;
        if config.workers == Some(0) || config.iterations == Some(0) {
            return Err(Failure::input(format!(
                "config {}: workers and iterations must be at least 1",
                path.display()
            )));
        }
        // relative lexicon paths are taken from the config file's directory
        let base = path.parent().unwrap_or(Path::new(""));
        let lexicons = config.lexicons.iter().map(|p| base.join(p)).collect();
        Ok(FileConfig { lexicons, ..config })
    }
}

/// Flag value if given, else config value, else the default.
pub fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

/// A switch that can only be turned on by its flag.
pub fn switch(flag: bool, config: Option<bool>, default: bool) -> bool {
    if flag {
        true
    } else {
        config.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_config() {
        assert_eq!(pick(Some(4), Some(2), 1), 4);
        assert_eq!(pick(None, Some(2), 1), 2);
        assert_eq!(pick(None::<u32>, None, 1), 1);
        assert!(switch(true, Some(false), false));
        assert!(!switch(false, Some(false), true));
    }

    #[test]
    fn parses_every_key() {
        let c: FileConfig = toml::from_str(
            "workers = 4\nformat = \"json\"\nprecedence = \"prec-first\"\ndedup = false\nepsilon = 1e-8\n",
        )
        .unwrap();
        assert_eq!(c.workers, Some(4));
        assert_eq!(c.format, Some(Format::Json));
        assert_eq!(c.precedence, Some(Precedence::PrecFirst));
        assert_eq!(c.dedup, Some(false));
        assert!(toml::from_str::<FileConfig>("wrokers = 4").is_err());
    }
}
