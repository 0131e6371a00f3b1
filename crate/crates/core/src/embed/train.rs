use std::sync::atomic::{AtomicU64, Ordering};

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EmbeddingModel, ModelMeta, SubwordConfig, Vocabulary};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub dim: usize,
    pub lr: f64,
    pub epochs: u32,
    pub window: usize,
    pub negatives: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 100,
            lr: 0.05,
            epochs: 5,
            window: 5,
            negatives: 5,
            seed: 42,
            workers: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || !(self.lr > 0.0) || self.window == 0 || self.workers == 0 {
            return Err(Error::Config(format!("invalid training config: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: u32,
    /// Corpus tokens processed so far, before subsampling.
    pub tokens: u64,
    /// Mean loss per (center, context) pair over the epoch.
    pub mean_loss: f64,
    /// Learning rate at the end of the epoch.
    pub lr: f64,
}

const NEG_TABLE_SIZE: usize = 10_000_000;
const NEG_POWER: f64 = 0.75;

fn negative_table(counts: &[u64]) -> Vec<u32> {
    let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(NEG_POWER)).collect();
    let z: f64 = weights.iter().sum();
    let mut table = Vec::with_capacity(NEG_TABLE_SIZE + counts.len());
    for (i, w) in weights.iter().enumerate() {
        let n = (w / z * NEG_TABLE_SIZE as f64).ceil() as usize;
        table.extend(std::iter::repeat(i as u32).take(n));
    }
    table
}

#[inline]
fn sigmoid32(x: f32) -> f32 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// One logistic term: accumulates `lr·(label − σ(h·u))·u` into `grad`,
/// moves `u` by `lr·(label − σ)·h` and returns the term's loss.
#[inline]
pub(crate) fn binary_update(hidden: &[f32], out: &mut [f32], label: f32, lr: f32, grad: &mut [f32]) -> f64 {
    let score: f32 = hidden.iter().zip(out.iter()).map(|(a, b)| a * b).sum();
    let p = sigmoid32(score);
    let g = lr * (label - p);
    for ((gi, ui), hi) in grad.iter_mut().zip(out.iter_mut()).zip(hidden) {
        *gi += g * *ui;
        *ui += g * hi;
    }
    let q = if label > 0.5 { p } else { 1.0 - p };
    -(q.max(1e-12) as f64).ln()
}

/// Raw view of a parameter matrix shared between workers. Updates race
/// without synchronization; with one worker access is exclusive.
#[derive(Clone, Copy)]
struct Shared {
    ptr: *mut f32,
    len: usize,
}

unsafe impl Send for Shared {}
unsafe impl Sync for Shared {}

impl Shared {
    fn new(v: &mut [f32]) -> Self {
        Shared {
            ptr: v.as_mut_ptr(),
            len: v.len(),
        }
    }

    #[allow(clippy::mut_from_ref)]
    unsafe fn row(&self, i: usize, dim: usize) -> &mut [f32] {
        debug_assert!((i + 1) * dim <= self.len);
        std::slice::from_raw_parts_mut(self.ptr.add(i * dim), dim)
    }
}

struct Job<'a> {
    lines: &'a [Vec<u32>],
    word_rows: &'a [Vec<u32>],
    keep: &'a [f64],
    table: &'a [u32],
    cfg: &'a TrainConfig,
    input: Shared,
    output: Shared,
    processed: &'a AtomicU64,
    total: u64,
}

impl Job<'_> {
    fn lr_now(&self) -> f32 {
        let p = self.processed.load(Ordering::Relaxed) as f64 / self.total as f64;
        (self.cfg.lr * (1.0 - p).max(0.0)) as f32
    }

    /// Returns (summed loss, pair count).
    fn run(&self, rng: &mut ChaCha8Rng) -> (f64, u64) {
        let dim = self.cfg.dim;
        let mut hidden = vec![0f32; dim];
        let mut grad = vec![0f32; dim];
        let mut kept = Vec::new();
        let (mut loss, mut pairs) = (0.0, 0u64);
        let vocab_size = self.word_rows.len();
        for line in self.lines {
            let lr = self.lr_now();
            kept.clear();
            kept.extend(line.iter().copied().filter(|&w| rng.gen::<f64>() < self.keep[w as usize]));
            for (i, &w) in kept.iter().enumerate() {
                let b = rng.gen_range(1..=self.cfg.window);
                let lo = i.saturating_sub(b);
                let hi = (i + b).min(kept.len() - 1);
                if lo == hi {
                    continue;
                }
                let rows = &self.word_rows[w as usize];
                hidden.fill(0.0);
                for &r in rows {
                    let v = unsafe { self.input.row(r as usize, dim) };
                    hidden.iter_mut().zip(v.iter()).for_each(|(h, x)| *h += x);
                }
                let inv = 1.0 / rows.len() as f32;
                hidden.iter_mut().for_each(|h| *h *= inv);
                grad.fill(0.0);
                for (c, &target) in kept.iter().enumerate().take(hi + 1).skip(lo) {
                    if c == i {
                        continue;
                    }
                    let out = unsafe { self.output.row(target as usize, dim) };
                    loss += binary_update(&hidden, out, 1.0, lr, &mut grad);
                    if vocab_size > 1 {
                        for _ in 0..self.cfg.negatives {
                            let neg = loop {
                                let n = self.table[rng.gen_range(0..self.table.len())];
                                if n != target {
                                    break n;
                                }
                            };
                            let out = unsafe { self.output.row(neg as usize, dim) };
                            loss += binary_update(&hidden, out, 0.0, lr, &mut grad);
                        }
                    }
                    pairs += 1;
                }
                // every contributing row receives the full hidden-vector step
                for &r in rows {
                    let v = unsafe { self.input.row(r as usize, dim) };
                    v.iter_mut().zip(grad.iter()).for_each(|(x, g)| *x += g);
                }
            }
            self.processed.fetch_add(line.len() as u64, Ordering::Relaxed);
        }
        (loss, pairs)
    }
}

fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64 + 1);
    rng
}

impl EmbeddingModel {
    /// Input vectors uniform in `[−1/dim, 1/dim]`, output vectors zero.
    pub fn initialize(vocab: Vocabulary, subword: SubwordConfig, train: TrainConfig, meta: ModelMeta) -> Self {
        let dim = train.dim;
        let rows = vocab.len() + subword.bucket_count as usize;
        let bound = 1.0 / dim as f32;
        let dist = Uniform::new_inclusive(-bound, bound);
        let mut rng = ChaCha8Rng::seed_from_u64(train.seed);
        let input: Vec<f32> = (0..rows * dim).map(|_| dist.sample(&mut rng)).collect();
        let output = vec![0f32; vocab.len() * dim];
        EmbeddingModel::from_parts(vocab, subword, train, meta, input, output)
    }
}

/// Train a skip-gram model with subword inputs on whitespace-tokenized
/// lines. Tokens outside `vocab` are ignored.
pub fn train<I, S>(
    lines: I,
    vocab: Vocabulary,
    tcfg: &TrainConfig,
    scfg: &SubwordConfig,
    meta: ModelMeta,
) -> Result<(EmbeddingModel, Vec<EpochStats>)>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    tcfg.validate()?;
    scfg.validate()?;
    if vocab.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let ids: Vec<Vec<u32>> = lines
        .into_iter()
        .map(|l| l.as_ref().split_whitespace().filter_map(|t| vocab.id(t)).collect::<Vec<u32>>())
        .filter(|l| !l.is_empty())
        .collect();
    let tokens_per_epoch: u64 = ids.iter().map(|l| l.len() as u64).sum();
    if tokens_per_epoch == 0 {
        return Err(Error::EmptyCorpus);
    }
    let keep: Vec<f64> = (0..vocab.len() as u32).map(|i| vocab.keep_probability(i)).collect();
    let table = negative_table(vocab.counts());
    let mut model = EmbeddingModel::initialize(vocab, *scfg, *tcfg, meta);
    let dim = tcfg.dim;
    let word_rows = model.word_rows.clone();
    let input = Shared::new(&mut model.input);
    let output = Shared::new(&mut model.output);
    let processed = AtomicU64::new(0);
    let total = tokens_per_epoch * tcfg.epochs as u64;
    let workers = tcfg.workers.min(ids.len()).max(1);
    let chunk = ids.len().div_ceil(workers);
    let mut rngs: Vec<ChaCha8Rng> = (0..workers).map(|w| worker_rng(tcfg.seed, w)).collect();
    let mut stats = Vec::new();
    debug_assert_eq!(input.len, (word_rows.len() + scfg.bucket_count as usize) * dim);

    for epoch in 1..=tcfg.epochs {
        let job = |w: usize| Job {
            lines: &ids[(w * chunk).min(ids.len())..((w + 1) * chunk).min(ids.len())],
            word_rows: &word_rows,
            keep: &keep,
            table: &table,
            cfg: tcfg,
            input,
            output,
            processed: &processed,
            total,
        };
        let results: Vec<(f64, u64)> = if workers == 1 {
            vec![job(0).run(&mut rngs[0])]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = rngs
                    .iter_mut()
                    .enumerate()
                    .map(|(w, rng)| {
                        let j = job(w);
                        s.spawn(move || j.run(rng))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("training worker panicked")).collect()
            })
        };
        let (loss, pairs) = results
            .iter()
            .fold((0.0, 0u64), |acc, r| (acc.0 + r.0, acc.1 + r.1));
        let done = processed.load(Ordering::Relaxed);
        let st = EpochStats {
            epoch,
            tokens: done,
            mean_loss: if pairs > 0 { loss / pairs as f64 } else { 0.0 },
            lr: tcfg.lr * (1.0 - done as f64 / total as f64).max(0.0),
        };
        log::info!(
            "epoch {epoch}: {} tokens, mean loss {:.4}, lr {:.5}",
            st.tokens,
            st.mean_loss,
            st.lr
        );
        stats.push(st);
    }
    Ok((model, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::grad;

    #[test]
    fn negative_table_follows_power_law() {
        let table = negative_table(&[16, 1]);
        let frac = table.iter().filter(|&&i| i == 0).count() as f64 / table.len() as f64;
        let expected = 8.0 / 9.0;
        assert!((frac - expected).abs() < 1e-6, "{frac}");
    }

    #[test]
    fn binary_update_is_a_gradient_step() {
        let h = [0.3f32, -0.2, 0.1];
        let u0 = [0.5f32, 0.1, -0.3];
        for label in [0.0f32, 1.0] {
            let mut u = u0;
            let mut g = [0f32; 3];
            let lr = 0.1;
            let loss = binary_update(&h, &mut u, label, lr, &mut g);
            let hd: Vec<f64> = h.iter().map(|&x| x as f64).collect();
            let ud: Vec<f64> = u0.iter().map(|&x| x as f64).collect();
            let reference = if label > 0.5 {
                grad::pair_gradient(&[hd.clone()], &ud, &[])
            } else {
                let zero = vec![0.0; 3];
                let mut r = grad::pair_gradient(&[hd.clone()], &zero, &[ud.clone()]);
                r.loss -= std::f64::consts::LN_2;
                r.pos = r.negs[0].clone();
                r
            };
            assert!((loss - reference.loss).abs() < 1e-5);
            for (gi, ri) in g.iter().zip(&reference.hidden) {
                assert!((*gi as f64 + lr as f64 * ri).abs() < 1e-6);
            }
            for i in 0..3 {
                let step = (u[i] - u0[i]) as f64;
                assert!((step + lr as f64 * reference.pos[i]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn worker_streams_differ() {
        let a: u64 = worker_rng(1, 0).gen();
        let b: u64 = worker_rng(1, 1).gen();
        assert_ne!(a, b);
    }
}
