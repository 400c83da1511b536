//! Unsupervised generative ranking model for entity coreference.
//!
//! The pipeline reads pre-parsed CoNLL-2012 documents ([`corpus`]), detects
//! mentions and assigns each one a resolution mode ([`mentions`]), encodes
//! mention/antecedent pairs into discrete keys ([`representation`]), learns
//! the emission table `t` and distance prior `q` with EM and decodes
//! antecedents ([`model`]), and scores the output against gold chains
//! ([`metrics`]). [`pipeline`] wires the stages together.
//!
//! Probability-valued types are generic over [`Real`] (`f32` or `f64`);
//! the aliases below fix the scalar to `f64`, which every tolerance in the
//! test suite assumes.

pub mod corpus;
pub mod mentions;
pub mod metrics;
pub mod model;
pub mod num;
pub mod pipeline;
pub mod representation;

pub use num::Real;

pub type ParameterTables64 = model::ParameterTables<f64>;
pub type ParameterTables32 = model::ParameterTables<f32>;
pub type SufficientStatistics64 = model::SufficientStatistics<f64>;
pub type PosteriorRow64 = model::PosteriorRow<f64>;
pub type Score64 = metrics::Score<f64>;
pub type Score32 = metrics::Score<f32>;
