//! Skip-gram embeddings with hashed character n-gram inputs, trained with
//! negative sampling, plus cosine nearest-neighbor queries that also work
//! for out-of-vocabulary strings.

pub mod grad;
mod io;
mod subword;
mod train;
mod vocab;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{export_text, load, save, MAGIC, FORMAT_VERSION};
pub use subword::{fnv1a32, ngram_strings, subword_ngrams, SubwordConfig};
pub use train::{train, EpochStats, TrainConfig};
pub use vocab::{build_vocab, build_vocab_with, Vocabulary, DEFAULT_DISCARD_THRESHOLD, DEFAULT_MIN_COUNT};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub corpus_id: String,
    pub camp: String,
}

/// Input matrix rows are `0..V` for words followed by `bucket_count`
/// n-gram rows; output rows are words only.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingModel {
    pub vocab: Vocabulary,
    pub subword: SubwordConfig,
    pub train: TrainConfig,
    pub meta: ModelMeta,
    pub(crate) input: Vec<f32>,
    pub(crate) output: Vec<f32>,
    /// Input rows summed for each vocabulary word: its own row, then its
    /// n-gram buckets.
    pub(crate) word_rows: Vec<Vec<u32>>,
}

impl EmbeddingModel {
    pub(crate) fn from_parts(
        vocab: Vocabulary,
        subword: SubwordConfig,
        train: TrainConfig,
        meta: ModelMeta,
        input: Vec<f32>,
        output: Vec<f32>,
    ) -> Self {
        let v = vocab.len() as u32;
        let word_rows = vocab
            .words()
            .iter()
            .enumerate()
            .map(|(i, w)| {
                std::iter::once(i as u32)
                    .chain(subword_ngrams(w, &subword, true).into_iter().map(|b| v + b))
                    .collect()
            })
            .collect();
        EmbeddingModel {
            vocab,
            subword,
            train,
            meta,
            input,
            output,
            word_rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.train.dim
    }

    pub fn input_matrix(&self) -> &[f32] {
        &self.input
    }

    pub fn output_matrix(&self) -> &[f32] {
        &self.output
    }

    fn mean_of_rows(&self, rows: &[u32]) -> Vec<f32> {
        let dim = self.dim();
        let mut v = vec![0f32; dim];
        for &r in rows {
            let row = &self.input[r as usize * dim..(r as usize + 1) * dim];
            v.iter_mut().zip(row).for_each(|(a, b)| *a += b);
        }
        let inv = 1.0 / rows.len() as f32;
        v.iter_mut().for_each(|a| *a *= inv);
        v
    }

    /// Mean of the word's own row and its n-gram rows; out-of-vocabulary
    /// words use n-gram rows alone.
    pub fn vector(&self, word: &str) -> Result<Vec<f32>> {
        if let Some(id) = self.vocab.id(word) {
            return Ok(self.mean_of_rows(&self.word_rows[id as usize]));
        }
        let v = self.vocab.len() as u32;
        let rows: Vec<u32> = subword_ngrams(word, &self.subword, false)
            .into_iter()
            .map(|b| v + b)
            .collect();
        if rows.is_empty() {
            return Err(Error::NoRepresentableNgrams(word.to_string()));
        }
        Ok(self.mean_of_rows(&rows))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NNResult {
    pub term: String,
    pub rank: usize,
    pub cosine: f32,
}

/// Unit-normalized vocabulary vectors for repeated queries.
pub struct NeighborIndex<'a> {
    model: &'a EmbeddingModel,
    unit: Vec<f32>,
}

fn normalized(mut v: Vec<f32>) -> Vec<f32> {
    let norm = v.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x = (*x as f64 / norm) as f32);
    }
    v
}

impl<'a> NeighborIndex<'a> {
    pub fn new(model: &'a EmbeddingModel) -> Self {
        let mut unit = Vec::with_capacity(model.vocab.len() * model.dim());
        for rows in &model.word_rows {
            unit.extend(normalized(model.mean_of_rows(rows)));
        }
        NeighborIndex { model, unit }
    }

    /// Top `k` vocabulary words by cosine, ties broken by the word, query
    /// excluded.
    pub fn nearest(&self, query: &str, k: usize) -> Result<Vec<NNResult>> {
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        let q = normalized(self.model.vector(query)?);
        let dim = self.model.dim();
        let skip = self.model.vocab.id(query);
        let mut scored: Vec<(f32, u32)> = self
            .unit
            .chunks_exact(dim)
            .enumerate()
            .filter(|(i, _)| Some(*i as u32) != skip)
            .map(|(i, row)| {
                let c: f64 = row.iter().zip(&q).map(|(a, b)| *a as f64 * *b as f64).sum();
                (c.clamp(-1.0, 1.0) as f32, i as u32)
            })
            .collect();
        let words = self.model.vocab.words();
        let cmp = |a: &(f32, u32), b: &(f32, u32)| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| words[a.1 as usize].cmp(&words[b.1 as usize]))
        };
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, cmp);
            scored.truncate(k);
        }
        scored.sort_by(cmp);
        Ok(scored
            .into_iter()
            .enumerate()
            .map(|(r, (cosine, i))| NNResult {
                term: words[i as usize].clone(),
                rank: r + 1,
                cosine,
            })
            .collect())
    }
}

pub fn nearest_neighbors(model: &EmbeddingModel, query: &str, k: usize) -> Result<Vec<NNResult>> {
    NeighborIndex::new(model).nearest(query, k)
}

pub fn cosine(a: &[f32], b: &[f32]) -> f32 {
    let (mut dot, mut na, mut nb) = (0f64, 0f64, 0f64);
    for (x, y) in a.iter().zip(b) {
        dot += *x as f64 * *y as f64;
        na += (*x as f64).powi(2);
        nb += (*y as f64).powi(2);
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0) as f32
}
