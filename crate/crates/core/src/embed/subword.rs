use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubwordConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub bucket_count: u32,
}

impl Default for SubwordConfig {
    fn default() -> Self {
        SubwordConfig {
            n_min: 3,
            n_max: 6,
            bucket_count: 2_000_000,
        }
    }
}

impl SubwordConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max || self.bucket_count == 0 {
            return Err(Error::Config(format!(
                "invalid subword config: n {}..{}, {} buckets",
                self.n_min, self.n_max, self.bucket_count
            )));
        }
        Ok(())
    }
}

/// FNV-1a, 32-bit, over UTF-8 bytes.
pub fn fnv1a32(bytes: &[u8]) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for &b in bytes {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

/// Character n-grams of `<word>` with lengths `n_min..=n_max`, in order of
/// start position then length. The whole wrapped word is left out for
/// in-vocabulary words, which carry their own vector.
pub fn ngram_strings(word: &str, cfg: &SubwordConfig, in_vocab: bool) -> Vec<String> {
    let wrapped: Vec<char> = std::iter::once('<')
        .chain(word.chars())
        .chain(std::iter::once('>'))
        .collect();
    let len = wrapped.len();
    let mut out = Vec::new();
    for start in 0..len {
        for n in cfg.n_min..=cfg.n_max {
            if start + n > len {
                break;
            }
            if in_vocab && n == len {
                continue;
            }
            out.push(wrapped[start..start + n].iter().collect());
        }
    }
    out
}

pub fn subword_ngrams(word: &str, cfg: &SubwordConfig, in_vocab: bool) -> Vec<u32> {
    ngram_strings(word, cfg, in_vocab)
        .iter()
        .map(|g| fnv1a32(g.as_bytes()) % cfg.bucket_count)
        .collect()
}
