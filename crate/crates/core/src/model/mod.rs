//! θ = {t, q}, EM training and antecedent decoding.

mod error;
mod inference;
mod io;
mod params;
mod stats;
mod train;

pub use error::{ModelError, ModelIoError};
pub use inference::{
    accumulate_document, clusters_from_antecedents, decode_document, e_step_document,
    log_likelihood, posterior_row, prior_antecedent, prob_mention, Decoded, PosteriorRow,
};
pub use io::{load_model, model_to_string, parse_model, save_model, MODEL_HEADER};
pub use params::{ModeTable, ParameterTables, DEFAULT_EPSILON};
pub use stats::SufficientStatistics;
pub use train::{
    e_step_corpus, m_step, train_em, DevEvaluator, IterationRecord, TrainConfig, TrainOutcome,
};
