//! Archive ingestion: status JSON lines to normalized tweet and user
//! records, content keys for retweet/duplicate grouping, and the
//! user-to-content endorsement index.

mod index;
mod store;

use std::collections::HashSet;
use std::io::BufRead;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::textprep::{collapse_whitespace, turkish_lowercase};

pub use index::{build_retweet_index, IndexBuilder, OriginAliases, RetweetIndex};
pub use store::{
    file_sha256, ingest_files, read_tweets, read_users, write_json, write_jsonl, CorpusManifest, IngestOptions,
    IngestStats, ManifestFile, MANIFEST_FILE, SCHEMA_VERSION, STATS_FILE, TWEETS_FILE, USERS_FILE,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub author_id: String,
    pub text: String,
    #[serde(default)]
    pub lang: String,
    /// Id of the retweeted status, when this record is a retweet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin_id: Option<String>,
    /// Author of the retweeted status, when the archive carries it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin_author_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<DateTime<Utc>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserRecord {
    pub user_id: String,
    #[serde(default)]
    pub screen_name: String,
    #[serde(default)]
    pub display_name: String,
    #[serde(default)]
    pub description: String,
}

/// Everything one archive line yields.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedStatus {
    pub tweet: TweetRecord,
    pub user: UserRecord,
    /// Profile of the retweeted status' author.
    pub origin_user: Option<UserRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KeyKind {
    Origin,
    TextHash,
}

/// Canonical identity of a piece of content across retweets and exact
/// duplicates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ContentKey {
    pub kind: KeyKind,
    pub value: String,
}

impl ContentKey {
    pub fn origin(id: impl Into<String>) -> Self {
        ContentKey {
            kind: KeyKind::Origin,
            value: id.into(),
        }
    }
}

impl std::fmt::Display for ContentKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            KeyKind::Origin => write!(f, "origin:{}", self.value),
            KeyKind::TextHash => write!(f, "text:{}", self.value),
        }
    }
}

fn id_field(v: Option<&Value>) -> Option<String> {
    match v? {
        Value::String(s) if !s.is_empty() => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Prefer the `id_str` variant that archives carry next to numeric ids.
fn status_id(obj: &Value) -> Option<String> {
    id_field(obj.get("id_str")).or_else(|| id_field(obj.get("id")))
}

fn str_field(obj: &Value, name: &str) -> String {
    obj.get(name).and_then(Value::as_str).unwrap_or("").to_string()
}

fn user_record(user: &Value) -> Option<UserRecord> {
    Some(UserRecord {
        user_id: status_id(user)?,
        screen_name: str_field(user, "screen_name"),
        display_name: str_field(user, "name"),
        description: str_field(user, "description"),
    })
}

fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    // classic archive format: "Wed Oct 10 20:19:24 +0000 2018"
    DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y")
        .or_else(|_| DateTime::parse_from_rfc3339(s))
        .ok()
        .map(|t| t.with_timezone(&Utc))
}

/// Parse one status object. Unknown fields are ignored.
pub fn parse_tweet_line(line: &str) -> Result<ParsedStatus> {
    let v: Value =
        serde_json::from_str(line).map_err(|e| Error::MalformedRecord(format!("invalid JSON: {e}")))?;
    if !v.is_object() {
        return Err(Error::MalformedRecord("not a JSON object".into()));
    }
    let tweet_id = status_id(&v).ok_or_else(|| Error::MalformedRecord("missing id".into()))?;
    let user = v
        .get("user")
        .and_then(user_record)
        .ok_or_else(|| Error::MalformedRecord(format!("status {tweet_id}: missing user.id")))?;
    let text = v
        .get("full_text")
        .and_then(Value::as_str)
        .or_else(|| v.get("text").and_then(Value::as_str))
        .ok_or_else(|| Error::MalformedRecord(format!("status {tweet_id}: missing text")))?
        .to_string();
    let retweeted = v.get("retweeted_status").filter(|r| r.is_object());
    let origin_id = retweeted.and_then(status_id);
    if origin_id.as_deref() == Some(tweet_id.as_str()) {
        return Err(Error::MalformedRecord(format!(
            "status {tweet_id} retweets itself"
        )));
    }
    let origin_user = retweeted.and_then(|r| r.get("user")).and_then(user_record);
    let tweet = TweetRecord {
        tweet_id,
        author_id: user.user_id.clone(),
        text,
        lang: str_field(&v, "lang"),
        origin_id: origin_id.clone(),
        origin_author_id: origin_id.and(origin_user.as_ref().map(|u| u.user_id.clone())),
        created_at: v
            .get("created_at")
            .and_then(Value::as_str)
            .and_then(parse_timestamp),
    };
    Ok(ParsedStatus {
        tweet,
        user,
        origin_user,
    })
}

/// Parse a JSONL stream. Malformed lines are skipped and counted; blank
/// lines are ignored entirely.
pub fn parse_lines<R: BufRead>(reader: R) -> std::io::Result<(Vec<ParsedStatus>, usize)> {
    let mut parsed = Vec::new();
    let mut malformed = 0;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_tweet_line(&line) {
            Ok(p) => parsed.push(p),
            Err(e) => {
                log::debug!("skipping line: {e}");
                malformed += 1;
            }
        }
    }
    Ok((parsed, malformed))
}

pub fn filter_language(r: &TweetRecord, allowed: &HashSet<String>) -> bool {
    !r.lang.is_empty() && allowed.contains(&r.lang)
}

/// Text normalization used for duplicate detection.
pub fn normalize_for_hash(text: &str) -> String {
    collapse_whitespace(&turkish_lowercase(text))
}

pub fn content_key(r: &TweetRecord) -> ContentKey {
    match &r.origin_id {
        Some(origin) => ContentKey::origin(origin.clone()),
        None => {
            let digest = Sha256::digest(normalize_for_hash(&r.text).as_bytes());
            ContentKey {
                kind: KeyKind::TextHash,
                value: hex::encode(&digest[..16]),
            }
        }
    }
}
