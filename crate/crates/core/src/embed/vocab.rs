use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kept tokens ordered by descending count, ties lexicographic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    pub min_count: u64,
    /// Occurrences of kept tokens.
    pub total_tokens: u64,
    pub discard_threshold: f64,
    #[serde(skip)]
    index: HashMap<String, u32>,
}

pub const DEFAULT_MIN_COUNT: u64 = 5;
pub const DEFAULT_DISCARD_THRESHOLD: f64 = 1e-4;

impl Vocabulary {
    fn from_parts(words: Vec<String>, counts: Vec<u64>, min_count: u64, t: f64) -> Self {
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Vocabulary {
            total_tokens: counts.iter().sum(),
            words,
            counts,
            min_count,
            discard_threshold: t,
            index,
        }
    }

    pub(crate) fn reindex(mut self) -> Self {
        self.index = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        self
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn count(&self, word: &str) -> Option<u64> {
        self.id(word).map(|i| self.counts[i as usize])
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Probability of keeping one occurrence of `id` under frequent-word
    /// subsampling.
    pub fn keep_probability(&self, id: u32) -> f64 {
        let f = self.counts[id as usize] as f64 / self.total_tokens as f64;
        let r = self.discard_threshold / f;
        (r.sqrt() + r).min(1.0)
    }
}

/// Count whitespace-separated tokens over `lines`.
pub fn build_vocab<I, S>(lines: I, min_count: u64) -> Result<Vocabulary>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    build_vocab_with(lines, min_count, DEFAULT_DISCARD_THRESHOLD)
}

pub fn build_vocab_with<I, S>(lines: I, min_count: u64, t: f64) -> Result<Vocabulary>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts: HashMap<String, u64> = HashMap::new();
    for line in lines {
        for tok in line.as_ref().split_whitespace() {
            *counts.entry(tok.to_string()).or_default() += 1;
        }
    }
    let mut kept: Vec<(String, u64)> = counts.into_iter().filter(|(_, c)| *c >= min_count).collect();
    if kept.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let (words, counts) = kept.into_iter().unzip();
    Ok(Vocabulary::from_parts(words, counts, min_count, t))
}
