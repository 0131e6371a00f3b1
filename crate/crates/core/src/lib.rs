//! Stance-split embedding toolkit: archive ingestion, retweet-based stance
//! propagation, Turkish text preprocessing, per-camp subword skip-gram
//! embeddings and rank-based polarity reports.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod stance;
pub mod synth;
pub mod textprep;

pub use error::{Error, Result};
