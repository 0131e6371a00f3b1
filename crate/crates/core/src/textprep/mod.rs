//! Tweet-to-token normalization for Turkish text.
//!
//! The default pipeline is: case folding, entity removal, number
//! replacement, non-letter removal, Snowball stemming and ASCII
//! transliteration, in that order. Every stage is a pure function of its
//! input.

mod stemmer;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use stemmer::stem;

/// One step of the preprocessing pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    CaseFold,
    StripEntities,
    NumberToken,
    RemoveNonLetters,
    Stem,
    Transliterate,
}

impl Stage {
    pub const DEFAULT_ORDER: [Stage; 6] = [
        Stage::CaseFold,
        Stage::StripEntities,
        Stage::NumberToken,
        Stage::RemoveNonLetters,
        Stage::Stem,
        Stage::Transliterate,
    ];
}

/// Ordered stage list plus the replacement token for digit runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub stages: Vec<Stage>,
    pub number_token: String,
    /// Drop tokens that still contain characters outside `a-z` once the
    /// pipeline has transliterated them (non-Latin scripts, accented
    /// foreign letters). Only applies when `Transliterate` is configured.
    pub ascii_only: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            stages: Stage::DEFAULT_ORDER.to_vec(),
            number_token: "number".to_string(),
            ascii_only: true,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for stage in &self.stages {
            if !seen.insert(*stage) {
                return Err(Error::Config(format!("pipeline stage {stage:?} listed twice")));
            }
        }
        if self.number_token.is_empty() || self.number_token.chars().any(char::is_whitespace) {
            return Err(Error::Config("number_token must be a single non-empty word".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: PipelineConfig =
            toml::from_str(s).map_err(|e| Error::Config(format!("pipeline config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }
}

/// Turkish-locale lowercasing: `İ` folds to `i` and `I` folds to dotless `ı`.
pub fn turkish_lowercase(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'İ' => out.push('i'),
            'I' => out.push('ı'),
            _ => out.extend(c.to_lowercase()),
        }
    }
    out
}

fn is_url(token: &str) -> bool {
    let lower = token.to_ascii_lowercase();
    if lower.starts_with("www.") {
        return true;
    }
    match lower.find("://") {
        Some(pos) if pos > 0 => lower[..pos]
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')),
        _ => false,
    }
}

fn is_entity(token: &str) -> bool {
    let core = token.trim_start_matches(['"', '\'', '(', '[', '{', '“', '‘']);
    core.starts_with('#') || core.starts_with('@') || is_url(core)
}

/// Remove URLs, hashtags and user mentions, token by token.
pub fn strip_entities(s: &str) -> String {
    s.split_whitespace()
        .filter(|t| !is_entity(t))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Replace every maximal run of digits with `token`, delimited by spaces.
pub fn number_token(s: &str, token: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_run = false;
    for c in s.chars() {
        if c.is_numeric() {
            if !in_run {
                out.push(' ');
                out.push_str(token);
                out.push(' ');
                in_run = true;
            }
        } else {
            in_run = false;
            out.push(c);
        }
    }
    collapse_whitespace(&out)
}

/// Delete everything that is neither a letter nor whitespace.
pub fn remove_nonletters(s: &str) -> String {
    let kept: String = s
        .chars()
        .filter(|c| c.is_alphabetic() || c.is_whitespace())
        .collect();
    collapse_whitespace(&kept)
}

/// Map Turkish-specific letters to the closest ASCII letter.
pub fn transliterate(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            'ç' => 'c',
            'ğ' => 'g',
            'ı' => 'i',
            'ö' => 'o',
            'ş' => 's',
            'ü' => 'u',
            'Ç' => 'C',
            'Ğ' => 'G',
            'İ' => 'I',
            'Ö' => 'O',
            'Ş' => 'S',
            'Ü' => 'U',
            // circumflexed vowels of Turkish orthography
            'â' => 'a',
            'î' => 'i',
            'û' => 'u',
            'Â' => 'A',
            'Î' => 'I',
            'Û' => 'U',
            other => other,
        })
        .collect()
}

pub fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Token sequence produced by the pipeline. Tokens are never empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenSeq {
    pub tokens: Vec<String>,
}

impl TokenSeq {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn join(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Run the configured stages over one tweet and split on whitespace.
pub fn preprocess_tweet(s: &str, cfg: &PipelineConfig) -> TokenSeq {
    let mut text = s.to_string();
    for stage in &cfg.stages {
        text = match stage {
            Stage::CaseFold => turkish_lowercase(&text),
            Stage::StripEntities => strip_entities(&text),
            Stage::NumberToken => number_token(&text, &cfg.number_token),
            Stage::RemoveNonLetters => remove_nonletters(&text),
            Stage::Stem => text
                .split_whitespace()
                .map(|w| {
                    if w == cfg.number_token {
                        w.to_string()
                    } else {
                        stem(w)
                    }
                })
                .collect::<Vec<_>>()
                .join(" "),
            Stage::Transliterate => transliterate(&text),
        };
    }
    let ascii_filter = cfg.ascii_only && cfg.stages.contains(&Stage::Transliterate);
    let tokens = text
        .split_whitespace()
        .filter(|t| !ascii_filter || t.chars().all(|c| c.is_ascii_lowercase()))
        .map(str::to_string)
        .collect();
    TokenSeq { tokens }
}

/// Normalize a single term (lexicon surface, entity alias) through the
/// pipeline. Multi-word input is concatenated into one token.
pub fn normalize_term(s: &str, cfg: &PipelineConfig) -> String {
    preprocess_tweet(s, cfg).tokens.concat()
}
