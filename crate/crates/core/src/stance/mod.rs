//! Seed labeling from profile rules and exclusive co-endorsement label
//! propagation over the retweet index.

mod rules;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{RetweetIndex, UserRecord};
use crate::error::{Error, Result};

pub use rules::{default_rules, load_rules, parse_rules, Field, MatchMode, SeedRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stance {
    Pro,
    Anti,
}

impl Stance {
    pub fn opposite(self) -> Stance {
        match self {
            Stance::Pro => Stance::Anti,
            Stance::Anti => Stance::Pro,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stance::Pro => "pro",
            Stance::Anti => "anti",
        }
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pro" => Ok(Stance::Pro),
            "anti" => Ok(Stance::Anti),
            other => Err(Error::Config(format!("unknown stance {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Index of the rule that fired first.
    Seed { rule: usize },
    /// Iteration (≥ 1) at which the user qualified.
    Propagated { iteration: u32 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Seed { rule } => write!(f, "seed:{rule}"),
            Provenance::Propagated { iteration } => write!(f, "propagated:{iteration}"),
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedRecord(format!("bad provenance {s:?}"));
        let (kind, n) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "seed" => Ok(Provenance::Seed {
                rule: n.parse().map_err(|_| bad())?,
            }),
            "propagated" => {
                let iteration: u32 = n.parse().map_err(|_| bad())?;
                if iteration == 0 {
                    return Err(bad());
                }
                Ok(Provenance::Propagated { iteration })
            }
            _ => Err(bad()),
        }
    }
}

/// Labels plus users whose profiles hit rules of both camps.
/// `labels` and `conflicts` are disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StanceLabeling {
    pub labels: BTreeMap<String, (Stance, Provenance)>,
    pub conflicts: BTreeSet<String>,
}

impl StanceLabeling {
    pub fn label_of(&self, user: &str) -> Option<Stance> {
        self.labels.get(user).map(|l| l.0)
    }

    pub fn count(&self, s: Stance) -> usize {
        self.labels.values().filter(|l| l.0 == s).count()
    }

    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for (user, (stance, prov)) in &self.labels {
            out.push_str(&format!("{user}\t{stance}\t{prov}\n"));
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn read_tsv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut labeling = StanceLabeling::default();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::MalformedRecord(format!(
                    "{}:{}: expected 3 columns",
                    path.display(),
                    n + 1
                )));
            }
            labeling
                .labels
                .insert(cols[0].to_string(), (cols[1].parse()?, cols[2].parse()?));
        }
        Ok(labeling)
    }
}

/// Users hitting rules, for manual review.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleHit {
    pub user_id: String,
    pub pro_rules: Vec<usize>,
    pub anti_rules: Vec<usize>,
}

pub fn apply_seed_rules<'a>(
    users: impl IntoIterator<Item = &'a UserRecord>,
    rules: &[SeedRule],
) -> StanceLabeling {
    seed_with_hits(users, rules).0
}

/// Seed labeling plus every user that hit at least one rule.
pub fn seed_with_hits<'a>(
    users: impl IntoIterator<Item = &'a UserRecord>,
    rules: &[SeedRule],
) -> (StanceLabeling, Vec<RuleHit>) {
    let mut labeling = StanceLabeling::default();
    let mut hits = Vec::new();
    for user in users {
        let mut hit = RuleHit {
            user_id: user.user_id.clone(),
            ..RuleHit::default()
        };
        for (i, rule) in rules.iter().enumerate() {
            if rule.matches(user) {
                match rule.label {
                    Stance::Pro => hit.pro_rules.push(i),
                    Stance::Anti => hit.anti_rules.push(i),
                }
            }
        }
        match (hit.pro_rules.first(), hit.anti_rules.first()) {
            (None, None) => continue,
            (Some(&r), None) => {
                labeling.conflicts.remove(&user.user_id);
                labeling
                    .labels
                    .insert(user.user_id.clone(), (Stance::Pro, Provenance::Seed { rule: r }));
            }
            (None, Some(&r)) => {
                labeling.conflicts.remove(&user.user_id);
                labeling
                    .labels
                    .insert(user.user_id.clone(), (Stance::Anti, Provenance::Seed { rule: r }));
            }
            (Some(_), Some(_)) => {
                labeling.labels.remove(&user.user_id);
                labeling.conflicts.insert(user.user_id.clone());
            }
        }
        hits.push(hit);
    }
    (labeling, hits)
}

pub fn write_review(path: &Path, hits: &[RuleHit], rules: &[SeedRule]) -> Result<()> {
    let join = |ids: &[usize]| {
        ids.iter()
            .map(|&i| rules[i].pattern.clone())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = String::from("user_id\tstatus\tpro_rules\tanti_rules\n");
    for h in hits {
        let status = match (h.pro_rules.is_empty(), h.anti_rules.is_empty()) {
            (false, false) => "conflict",
            (false, true) => "pro",
            _ => "anti",
        };
        out.push_str(&format!(
            "{}\t{status}\t{}\t{}\n",
            h.user_id,
            join(&h.pro_rules),
            join(&h.anti_rules)
        ));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationConfig {
    pub threshold: usize,
    pub max_iterations: u32,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig {
            threshold: 10,
            max_iterations: 50,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.threshold == 0 || self.max_iterations == 0 {
            return Err(Error::Config(
                "threshold and max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One synchronous propagation round over the snapshot `current`.
/// Returned pairs are sorted by user id.
pub fn propagate_once(
    index: &RetweetIndex,
    current: &StanceLabeling,
    cfg: &PropagationConfig,
) -> Vec<(String, Stance)> {
    let n = index.num_users();
    let snapshot: Vec<Option<Stance>> = (0..n)
        .map(|u| current.label_of(index.user_name(u)))
        .collect();
    // bit 0: pro-endorsed, bit 1: anti-endorsed
    let mut endorsed = vec![0u8; index.num_keys()];
    for (u, label) in snapshot.iter().enumerate() {
        let bit = match label {
            Some(Stance::Pro) => 1,
            Some(Stance::Anti) => 2,
            None => continue,
        };
        for &k in index.user_key_ids(u) {
            endorsed[k as usize] |= bit;
        }
    }
    let mut out: Vec<(String, Stance)> = (0..n)
        .into_par_iter()
        .filter(|&u| snapshot[u].is_none() && !current.conflicts.contains(index.user_name(u)))
        .filter_map(|u| {
            let (mut pro, mut anti) = (0usize, 0usize);
            for &k in index.user_key_ids(u) {
                match endorsed[k as usize] {
                    1 => pro += 1,
                    2 => anti += 1,
                    _ => {}
                }
            }
            let stance = if anti == 0 && pro >= cfg.threshold {
                Stance::Pro
            } else if pro == 0 && anti >= cfg.threshold {
                Stance::Anti
            } else {
                return None;
            };
            Some((index.user_name(u).to_string(), stance))
        })
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationOutcome {
    pub labeling: StanceLabeling,
    /// Newly labeled users per iteration, including a final zero when the
    /// fixpoint was reached.
    pub counts: Vec<usize>,
    pub converged: bool,
}

pub fn propagate_to_fixpoint(
    index: &RetweetIndex,
    seeds: &StanceLabeling,
    cfg: &PropagationConfig,
) -> PropagationOutcome {
    let mut labeling = seeds.clone();
    let mut counts = Vec::new();
    let mut converged = false;
    for iteration in 1..=cfg.max_iterations {
        let new = propagate_once(index, &labeling, cfg);
        counts.push(new.len());
        log::info!("iteration {iteration}: {} new labels", new.len());
        if new.is_empty() {
            converged = true;
            break;
        }
        for (user, stance) in new {
            labeling
                .labels
                .insert(user, (stance, Provenance::Propagated { iteration }));
        }
    }
    if !converged {
        log::warn!(
            "propagation stopped at max_iterations={} before reaching a fixpoint",
            cfg.max_iterations
        );
    }
    PropagationOutcome {
        labeling,
        counts,
        converged,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldLabel {
    Pro,
    Anti,
    Undecidable,
}

impl FromStr for GoldLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pro" => Ok(GoldLabel::Pro),
            "anti" => Ok(GoldLabel::Anti),
            "undecidable" => Ok(GoldLabel::Undecidable),
            other => Err(Error::MalformedRecord(format!("unknown gold label {other:?}"))),
        }
    }
}

impl From<Stance> for GoldLabel {
    fn from(s: Stance) -> Self {
        match s {
            Stance::Pro => GoldLabel::Pro,
            Stance::Anti => GoldLabel::Anti,
        }
    }
}

pub fn read_gold_tsv(path: &Path) -> Result<BTreeMap<String, GoldLabel>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut gold = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (user, label) = line.split_once('\t').ok_or_else(|| {
            Error::MalformedRecord(format!("{}:{}: expected 2 columns", path.display(), n + 1))
        })?;
        gold.insert(user.to_string(), label.parse()?);
    }
    Ok(gold)
}

pub fn write_gold_tsv(path: &Path, gold: &BTreeMap<String, GoldLabel>) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    for (user, label) in gold {
        let l = match label {
            GoldLabel::Pro => "pro",
            GoldLabel::Anti => "anti",
            GoldLabel::Undecidable => "undecidable",
        };
        writeln!(f, "{user}\t{l}").map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub matched: usize,
    pub mismatched: usize,
    pub undecidable: usize,
    pub unlabeled: usize,
    /// `matched / (matched + mismatched)`; `None` when nothing was decided.
    pub decided_accuracy: Option<f64>,
}

pub fn evaluate_against(
    result: &StanceLabeling,
    gold: &BTreeMap<String, GoldLabel>,
) -> Result<Evaluation> {
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    let mut ev = Evaluation::default();
    for (user, g) in gold {
        match (g, result.label_of(user)) {
            (GoldLabel::Undecidable, _) => ev.undecidable += 1,
            (_, None) => ev.unlabeled += 1,
            (g, Some(s)) if *g == GoldLabel::from(s) => ev.matched += 1,
            _ => ev.mismatched += 1,
        }
    }
    let decided = ev.matched + ev.mismatched;
    ev.decided_accuracy = (decided > 0).then(|| ev.matched as f64 / decided as f64);
    Ok(ev)
}
