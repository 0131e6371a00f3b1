use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Stance;
use crate::corpus::UserRecord;
use crate::error::{Error, Result};
use crate::textprep::turkish_lowercase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    ScreenName,
    DisplayName,
    Description,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    Substring,
    /// The match must not be flanked by letters or digits.
    WordBoundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRule {
    pub pattern: String,
    pub field: Field,
    pub mode: MatchMode,
    pub label: Stance,
}

impl SeedRule {
    fn new(pattern: &str, field: Field, mode: MatchMode, label: Stance) -> Self {
        SeedRule {
            pattern: pattern.into(),
            field,
            mode,
            label,
        }
    }

    pub fn matches(&self, user: &UserRecord) -> bool {
        let text = match self.field {
            Field::ScreenName => &user.screen_name,
            Field::DisplayName => &user.display_name,
            Field::Description => &user.description,
        };
        let hay = turkish_lowercase(text);
        let needle = turkish_lowercase(&self.pattern);
        match self.mode {
            MatchMode::Substring => hay.contains(&needle),
            MatchMode::WordBoundary => word_boundary_match(&hay, &needle),
        }
    }
}

fn word_boundary_match(hay: &str, needle: &str) -> bool {
    let is_word = |c: Option<char>| c.is_some_and(|c| c.is_alphanumeric());
    hay.match_indices(needle).any(|(start, m)| {
        let before = hay[..start].chars().next_back();
        let after = hay[start + m.len()..].chars().next();
        // a leading '#' already delimits the pattern on the left
        (needle.starts_with('#') || !is_word(before)) && !is_word(after)
    })
}

/// Party and hashtag rules. "iyi" is also the everyday word for "good", so
/// it only matches as a whole word; MHP is left out on purpose.
pub fn default_rules() -> Vec<SeedRule> {
    use Field::*;
    use MatchMode::*;
    use Stance::*;
    let mut rules = Vec::new();
    for field in [ScreenName, DisplayName] {
        rules.push(SeedRule::new("akparti", field, Substring, Pro));
        rules.push(SeedRule::new("chp", field, Substring, Anti));
        rules.push(SeedRule::new("hdp", field, Substring, Anti));
        rules.push(SeedRule::new("iyiparti", field, Substring, Anti));
        rules.push(SeedRule::new("iyi", field, WordBoundary, Anti));
        // "IYI" folds to the dotless form under Turkish casing
        rules.push(SeedRule::new("ıyı", field, WordBoundary, Anti));
    }
    for field in [Description, DisplayName] {
        rules.push(SeedRule::new("#devam", field, Substring, Pro));
        rules.push(SeedRule::new("#tamam", field, Substring, Anti));
        rules.push(SeedRule::new("#rte", field, WordBoundary, Pro));
    }
    rules
}

#[derive(Deserialize)]
struct RulesFile {
    #[serde(default)]
    rule: Vec<SeedRule>,
}

pub fn parse_rules(text: &str) -> Result<Vec<SeedRule>> {
    let file: RulesFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if let Some(r) = file.rule.iter().find(|r| r.pattern.is_empty()) {
        return Err(Error::Config(format!("empty pattern in rule {r:?}")));
    }
    Ok(file.rule)
}

pub fn load_rules(path: &Path) -> Result<Vec<SeedRule>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_rules(&text)
}
