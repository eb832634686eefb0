//! Stance detection experiment toolkit.
//!
//! The crate covers the full pipeline for target-specific stance
//! classification of short texts: corpus loading and per-target splitting,
//! trigram-HMM part-of-speech tagging, subjectivity/arguing lexicon parsing,
//! CoNLL dependency-triple extraction, six feature-vector schemes, a
//! memory-based k-NN classifier with gain-ratio feature weighting, a random
//! forest classifier, and an experiment harness that ties them together and
//! emits accuracy reports.
//!
//! Every stage is deterministic: all randomness flows from an explicit seed,
//! so identical inputs and configuration reproduce identical reports.

pub mod conll;
pub mod corpus;
pub mod features;
pub mod forest;
pub mod harness;
pub mod lexicons;
pub mod mbl;
pub mod tagger;

pub use corpus::{Corpus, SentimentLabel, StanceLabel, Tweet};
pub use features::{FeatureScheme, FeatureVector, Vocabulary};
pub use forest::{ForestConfig, RandomForestModel};
pub use mbl::{InstanceBase, KnnConfig};
pub use tagger::{TagModel, TaggedToken};
