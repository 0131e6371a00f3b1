//! Fixtures shared by integration test targets.

use stancelens::analysis::{analyze_space, EntitySpec, Lexicon, LexiconEntry, MatchReport, Polarity};
use stancelens::embed::NNResult;

fn nns(terms: &[&str]) -> Vec<NNResult> {
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| NNResult {
            term: t.to_string(),
            rank: i + 1,
            cosine: 1.0 - 0.01 * (i + 1) as f32,
        })
        .collect()
}

fn lexicon() -> Lexicon {
    let entry = |w: &str, polarity| LexiconEntry {
        surface: w.to_string(),
        polarity,
        normalized: w.to_string(),
    };
    Lexicon {
        entries: vec![
            entry("lider", Polarity::Positive),
            entry("guclu", Polarity::Positive),
            entry("basarili", Polarity::Positive),
            entry("iyi", Polarity::Positive),
            entry("diktator", Polarity::Negative),
            entry("hirsiz", Polarity::Negative),
            entry("yalanci", Polarity::Negative),
        ],
        dropped: 0,
    }
}

/// Three spaces over a fixed neighbor list each: fuzzy and exact lexicon
/// hits, repeated hits, subsumption groups, an even-sized median and a
/// space with no negative matches.
pub fn golden_report() -> MatchReport {
    let entity = EntitySpec::new("erdogan", &["rte"], &["pro", "anti", "neutral"]);
    let lex = lexicon();
    let spaces = [
        (
            "pro",
            nns(&["reis", "lider", "erdoganimiz", "guclu", "liderr", "rteci", "yalanci", "iyi", "ii", "basarli"]),
        ),
        (
            "anti",
            nns(&["diktator", "diktatorr", "hirsiz", "yalanci", "diktatr", "tayyipci", "erdoganci", "hirsizlar", "lider", "millet"]),
        ),
        (
            "neutral",
            nns(&["guclu", "sehir", "haber", "lider", "gundem", "secim", "sandik", "oy", "meclis", "halk"]),
        ),
    ];
    MatchReport {
        entity: entity.canonical.clone(),
        aliases: entity.aliases.iter().cloned().collect(),
        k: 10,
        max_edit: 1,
        spaces: spaces
            .iter()
            .map(|(name, list)| analyze_space(name, list, &entity, &lex, 1))
            .collect(),
    }
}
