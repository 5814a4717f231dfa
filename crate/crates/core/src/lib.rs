//! Trace link recovery between high-level and low-level software artifacts.
//!
//! Source and target documents are enriched with biterms they share with
//! intermediate artifacts, scored with an IR model (VSM, LSI or JS), and the
//! candidate scores are raised along outer- and inner-transitive paths that
//! run through intermediate artifacts.

pub mod biterm;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod enrich;
pub mod error;
pub mod eval;
pub mod irmodels;
pub mod pipeline;
pub mod transitive;

pub use error::{Error, Result};
