//! Lexicon and subsumption matching over nearest-neighbor lists, grouped
//! by best rank, and cross-space reports that compare ranks only.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embed::{EmbeddingModel, NNResult, NeighborIndex};
use crate::error::{Error, Result};
use crate::textprep::{normalize_term, PipelineConfig};

pub use report::{render_report, ReportFormat};

/// Unit-cost edit distance over unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub surface: String,
    pub polarity: Polarity,
    pub normalized: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub entries: Vec<LexiconEntry>,
    /// Surfaces that normalized to nothing.
    pub dropped: usize,
}

/// Parse `surface<TAB>polarity` lines; `#` starts a comment line.
pub fn parse_lexicon(text: &str, cfg: &PipelineConfig) -> Result<Lexicon> {
    let mut lex = Lexicon::default();
    let mut seen: BTreeMap<String, Polarity> = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (surface, pol) = line
            .split_once('\t')
            .ok_or_else(|| Error::MalformedLexicon(format!("line {}: expected surface<TAB>polarity", n + 1)))?;
        let polarity = match pol.trim().to_ascii_lowercase().as_str() {
            "positive" => Polarity::Positive,
            "negative" => Polarity::Negative,
            other => {
                return Err(Error::MalformedLexicon(format!(
                    "line {}: unknown polarity {other:?}",
                    n + 1
                )))
            }
        };
        let normalized = normalize_term(surface, cfg);
        if normalized.is_empty() {
            lex.dropped += 1;
            continue;
        }
        match seen.get(&normalized) {
            Some(p) if *p != polarity => {
                return Err(Error::MalformedLexicon(format!(
                    "line {}: {normalized:?} is listed as both positive and negative",
                    n + 1
                )))
            }
            Some(_) => continue,
            None => {
                seen.insert(normalized.clone(), polarity);
            }
        }
        lex.entries.push(LexiconEntry {
            surface: surface.trim().to_string(),
            polarity,
            normalized,
        });
    }
    if lex.dropped > 0 {
        log::warn!("{} lexicon entries normalized to nothing and were dropped", lex.dropped);
    }
    if lex.entries.is_empty() {
        log::warn!("lexicon is empty");
    }
    Ok(lex)
}

pub fn load_lexicon(path: &Path, cfg: &PipelineConfig) -> Result<Lexicon> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lexicon(&text, cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntitySpec {
    pub canonical: String,
    /// Normalized; always contains `canonical`.
    pub aliases: BTreeSet<String>,
    pub spaces: Vec<String>,
}

impl EntitySpec {
    pub fn new(canonical: &str, aliases: &[&str], spaces: &[&str]) -> Self {
        let mut set: BTreeSet<String> = aliases.iter().map(|a| a.to_string()).collect();
        set.insert(canonical.to_string());
        EntitySpec {
            canonical: canonical.to_string(),
            aliases: set,
            spaces: spaces.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Deserialize)]
struct EntityFile {
    entity: Vec<RawEntity>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntity {
    canonical: String,
    #[serde(default)]
    aliases: Vec<String>,
    #[serde(default)]
    spaces: Vec<String>,
}

/// `[[entity]]` tables with `canonical`, `aliases` and `spaces`. Names are
/// run through the pipeline; multi-word names are concatenated.
pub fn parse_entities(text: &str, cfg: &PipelineConfig) -> Result<Vec<EntitySpec>> {
    let file: EntityFile = toml::from_str(text).map_err(|e| Error::Config(format!("entity file: {e}")))?;
    file.entity
        .into_iter()
        .map(|raw| {
            let canonical = normalize_term(&raw.canonical, cfg);
            if canonical.is_empty() {
                return Err(Error::Config(format!(
                    "entity {:?} normalizes to nothing",
                    raw.canonical
                )));
            }
            let mut aliases: BTreeSet<String> = raw
                .aliases
                .iter()
                .map(|a| normalize_term(a, cfg))
                .filter(|a| !a.is_empty())
                .collect();
            aliases.insert(canonical.clone());
            Ok(EntitySpec {
                canonical,
                aliases,
                spaces: raw.spaces,
            })
        })
        .collect()
}

pub fn load_entities(path: &Path, cfg: &PipelineConfig) -> Result<Vec<EntitySpec>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_entities(&text, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MatchKind {
    Sentiment { polarity: Polarity },
    Subsumption,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub term: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchGroup {
    pub label: String,
    pub kind: MatchKind,
    /// Smallest member rank.
    pub best_rank: usize,
    /// Number of members.
    pub occurrence_count: usize,
    pub members: Vec<Member>,
}

fn group(label: String, kind: MatchKind, members: Vec<Member>) -> MatchGroup {
    MatchGroup {
        best_rank: members.iter().map(|m| m.rank).min().unwrap_or(0),
        occurrence_count: members.len(),
        label,
        kind,
        members,
    }
}

fn sort_groups(groups: &mut [MatchGroup]) {
    groups.sort_by(|a, b| {
        (a.best_rank, a.kind, &a.label).cmp(&(b.best_rank, b.kind, &b.label))
    });
}

/// Below this many characters only exact lexicon matches count.
pub const MIN_FUZZY_LEN: usize = 4;

/// Closest lexicon entry within `max_edit`, ties to the smaller form.
fn best_entry<'a>(term: &str, lexicon: &'a Lexicon, max_edit: usize) -> Option<&'a LexiconEntry> {
    let tlen = term.chars().count();
    let mut best: Option<(usize, &LexiconEntry)> = None;
    for e in &lexicon.entries {
        let elen = e.normalized.chars().count();
        let allowed = if tlen < MIN_FUZZY_LEN || elen < MIN_FUZZY_LEN { 0 } else { max_edit };
        if tlen.abs_diff(elen) > allowed {
            continue;
        }
        let d = levenshtein(term, &e.normalized);
        if d > allowed {
            continue;
        }
        let better = match best {
            None => true,
            Some((bd, be)) => (d, &e.normalized) < (bd, &be.normalized),
        };
        if better {
            best = Some((d, e));
        }
    }
    best.map(|b| b.1)
}

pub fn match_sentiment(nns: &[NNResult], lexicon: &Lexicon, max_edit: usize) -> Vec<MatchGroup> {
    let mut by_entry: BTreeMap<&str, (Polarity, Vec<Member>)> = BTreeMap::new();
    for nn in nns {
        if let Some(e) = best_entry(&nn.term, lexicon, max_edit) {
            by_entry
                .entry(&e.normalized)
                .or_insert_with(|| (e.polarity, Vec::new()))
                .1
                .push(Member {
                    term: nn.term.clone(),
                    rank: nn.rank,
                });
        }
    }
    let mut groups: Vec<MatchGroup> = by_entry
        .into_iter()
        .map(|(label, (polarity, members))| group(label.to_string(), MatchKind::Sentiment { polarity }, members))
        .collect();
    sort_groups(&mut groups);
    groups
}

/// Neighbors that strictly contain an alias, one group per alias.
pub fn match_subsuming(nns: &[NNResult], entity: &EntitySpec) -> Vec<MatchGroup> {
    let mut groups: Vec<MatchGroup> = entity
        .aliases
        .iter()
        .filter_map(|alias| {
            let members: Vec<Member> = nns
                .iter()
                .filter(|nn| nn.term != *alias && nn.term.contains(alias.as_str()))
                .map(|nn| Member {
                    term: nn.term.clone(),
                    rank: nn.rank,
                })
                .collect();
            (!members.is_empty()).then(|| group(alias.clone(), MatchKind::Subsumption, members))
        })
        .collect();
    sort_groups(&mut groups);
    groups
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub space: String,
    pub groups: Vec<MatchGroup>,
    /// Median best rank over positive sentiment groups.
    pub median_positive_rank: Option<f64>,
    pub median_negative_rank: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub entity: String,
    pub aliases: Vec<String>,
    pub k: usize,
    pub max_edit: usize,
    pub spaces: Vec<SpaceReport>,
}

pub fn median(values: &mut [usize]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
    })
}

fn polarity_median(groups: &[MatchGroup], p: Polarity) -> Option<f64> {
    let mut ranks: Vec<usize> = groups
        .iter()
        .filter(|g| g.kind == MatchKind::Sentiment { polarity: p })
        .map(|g| g.best_rank)
        .collect();
    median(&mut ranks)
}

pub fn analyze_space(space: &str, nns: &[NNResult], entity: &EntitySpec, lexicon: &Lexicon, max_edit: usize) -> SpaceReport {
    let mut groups = match_sentiment(nns, lexicon, max_edit);
    groups.extend(match_subsuming(nns, entity));
    sort_groups(&mut groups);
    SpaceReport {
        space: space.to_string(),
        median_positive_rank: polarity_median(&groups, Polarity::Positive),
        median_negative_rank: polarity_median(&groups, Polarity::Negative),
        groups,
    }
}

/// Query `entity.canonical` in every named model and match its neighbors.
/// Every alias must be representable in every model.
pub fn compare_spaces(
    entity: &EntitySpec,
    models: &[(String, &EmbeddingModel)],
    lexicon: &Lexicon,
    k: usize,
    max_edit: usize,
) -> Result<MatchReport> {
    let mut spaces = Vec::with_capacity(models.len());
    for (name, model) in models {
        for alias in &entity.aliases {
            if model.vector(alias).is_err() {
                return Err(Error::UnrepresentableAlias {
                    alias: alias.clone(),
                    space: name.clone(),
                });
            }
        }
        let nns = NeighborIndex::new(model).nearest(&entity.canonical, k)?;
        spaces.push(analyze_space(name, &nns, entity, lexicon, max_edit));
    }
    Ok(MatchReport {
        entity: entity.canonical.clone(),
        aliases: entity.aliases.iter().cloned().collect(),
        k,
        max_edit,
        spaces,
    })
}
