use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EmbeddingModel, ModelMeta, SubwordConfig, TrainConfig, Vocabulary};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"STLNSEMB";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    vocab: Vocabulary,
    subword: SubwordConfig,
    train: TrainConfig,
    meta: ModelMeta,
}

/// Layout: magic, version (u32), header length (u64), JSON header, input
/// then output matrix as little-endian f32.
pub fn to_bytes(model: &EmbeddingModel) -> Result<Vec<u8>> {
    let header = serde_json::to_vec(&Header {
        vocab: model.vocab.clone(),
        subword: model.subword,
        train: model.train,
        meta: model.meta.clone(),
    })?;
    let mut out = Vec::with_capacity(24 + header.len() + 4 * (model.input.len() + model.output.len()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u64).to_le_bytes());
    out.extend_from_slice(&header);
    for x in model.input.iter().chain(&model.output) {
        out.extend_from_slice(&x.to_le_bytes());
    }
    Ok(out)
}

pub fn from_bytes(bytes: &[u8]) -> Result<EmbeddingModel> {
    let bad = |m: &str| Error::VersionMismatch(m.to_string());
    if bytes.len() < 20 || &bytes[..8] != MAGIC {
        return Err(bad("not a model file"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(bad(&format!("format version {version}, expected {FORMAT_VERSION}")));
    }
    let hlen = u64::from_le_bytes(bytes[12..20].try_into().unwrap()) as usize;
    let body = bytes.get(20..).ok_or_else(|| bad("truncated header"))?;
    if body.len() < hlen {
        return Err(bad("truncated header"));
    }
    let header: Header =
        serde_json::from_slice(&body[..hlen]).map_err(|e| bad(&format!("corrupt header: {e}")))?;
    let vocab = header.vocab.reindex();
    let dim = header.train.dim;
    let n_in = (vocab.len() + header.subword.bucket_count as usize) * dim;
    let n_out = vocab.len() * dim;
    let floats = &body[hlen..];
    if floats.len() != 4 * (n_in + n_out) {
        return Err(bad(&format!(
            "expected {} bytes of vectors, found {}",
            4 * (n_in + n_out),
            floats.len()
        )));
    }
    let mut values = floats
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()));
    let input: Vec<f32> = values.by_ref().take(n_in).collect();
    let output: Vec<f32> = values.collect();
    Ok(EmbeddingModel::from_parts(
        vocab,
        header.subword,
        header.train,
        header.meta,
        input,
        output,
    ))
}

pub fn save(model: &EmbeddingModel, path: &Path) -> Result<()> {
    let bytes = to_bytes(model)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<EmbeddingModel> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    from_bytes(&bytes)
}

/// `V dim` header, then one line per word with its full vector.
pub fn export_text(model: &EmbeddingModel, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "{} {}", model.vocab.len(), model.dim()).map_err(io)?;
    for word in model.vocab.words() {
        let v = model.vector(word)?;
        write!(w, "{word}").map_err(io)?;
        for x in v {
            write!(w, " {x}").map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    w.flush().map_err(io)
}
