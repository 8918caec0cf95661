//! Mine interesting trivia sentences for entities.
//!
//! The crate covers the whole path from vote-annotated training trivia to a
//! ranked top-k list of sentences from an entity's page:
//!
//! * [`corpus`] loads trivia, knowledge-base, annotation and page files.
//! * [`grading`] turns votes into likeness ratios and ordinal grades.
//! * [`selection`] extracts paragraph text, splits sentences and drops the
//!   ones that need outside context.
//! * [`features`] builds unigram, linguistic and entity feature vectors.
//! * [`ranker`] trains a pairwise ranking SVM and provides the baselines.
//! * [`eval`] computes P@k, Recall@k, NDCG@k, Cohen's kappa and paired
//!   t-tests.
//! * [`pipeline`] wires the stages into the train and retrieval phases.

pub mod corpus;
pub mod error;
pub mod features;
pub mod grading;
pub mod eval;
pub mod lexicon;
pub mod pipeline;
pub mod ranker;
pub mod selection;

pub use error::{Error, Result};
