use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{filter_language, parse_lines, TweetRecord, UserRecord};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const TWEETS_FILE: &str = "tweets.jsonl";
pub const USERS_FILE: &str = "users.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const STATS_FILE: &str = "ingest_stats.json";

#[derive(Clone, Debug, Default)]
pub struct IngestOptions {
    /// `None` keeps every language.
    pub languages: Option<HashSet<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub total: usize,
    pub kept: usize,
    pub malformed: usize,
    pub language_filtered: usize,
    pub duplicate_ids: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub path: String,
    pub kind: String,
    pub records: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub schema_version: u32,
    pub files: Vec<ManifestFile>,
}

impl CorpusManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let m: CorpusManifest = serde_json::from_str(&text)?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(Error::VersionMismatch(format!(
                "corpus schema {} (expected {SCHEMA_VERSION})",
                m.schema_version
            )));
        }
        Ok(m)
    }
}

pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| {
            Error::MalformedRecord(format!("{}:{}: {e}", path.display(), n + 1))
        })?);
    }
    Ok(out)
}

pub fn read_tweets(dir: &Path) -> Result<Vec<TweetRecord>> {
    read_jsonl(&dir.join(TWEETS_FILE))
}

pub fn read_users(dir: &Path) -> Result<Vec<UserRecord>> {
    read_jsonl(&dir.join(USERS_FILE))
}

/// Parse archive files into a corpus directory: tweet records in input
/// order (first occurrence of an id wins), user profiles deduplicated with
/// the last seen non-empty profile winning, a manifest and ingest statistics.
pub fn ingest_files(inputs: &[PathBuf], out_dir: &Path, opts: &IngestOptions) -> Result<IngestStats> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut stats = IngestStats::default();
    let mut seen = HashSet::new();
    let mut tweets = Vec::new();
    let mut users: BTreeMap<String, UserRecord> = BTreeMap::new();
    for input in inputs {
        let file = File::open(input).map_err(|e| Error::io(input, e))?;
        let (parsed, malformed) = parse_lines(BufReader::new(file)).map_err(|e| Error::io(input, e))?;
        stats.total += parsed.len() + malformed;
        stats.malformed += malformed;
        for p in parsed {
            if let Some(langs) = &opts.languages {
                if !filter_language(&p.tweet, langs) {
                    stats.language_filtered += 1;
                    continue;
                }
            }
            if !seen.insert(p.tweet.tweet_id.clone()) {
                stats.duplicate_ids += 1;
                continue;
            }
            if let Some(ou) = p.origin_user {
                users.entry(ou.user_id.clone()).or_insert(ou);
            }
            // id-only user objects never overwrite a known profile
            let bare = p.user.screen_name.is_empty() && p.user.display_name.is_empty() && p.user.description.is_empty();
            if !(bare && users.contains_key(&p.user.user_id)) {
                users.insert(p.user.user_id.clone(), p.user);
            }
            tweets.push(p.tweet);
        }
    }
    stats.kept = tweets.len();
    let users: Vec<UserRecord> = users.into_values().collect();

    let tweets_path = out_dir.join(TWEETS_FILE);
    let users_path = out_dir.join(USERS_FILE);
    write_jsonl(&tweets_path, &tweets)?;
    write_jsonl(&users_path, &users)?;
    let manifest = CorpusManifest {
        schema_version: SCHEMA_VERSION,
        files: vec![
            ManifestFile {
                path: TWEETS_FILE.into(),
                kind: "tweets".into(),
                records: tweets.len(),
                sha256: file_sha256(&tweets_path)?,
            },
            ManifestFile {
                path: USERS_FILE.into(),
                kind: "users".into(),
                records: users.len(),
                sha256: file_sha256(&users_path)?,
            },
        ],
    };
    write_json(&out_dir.join(MANIFEST_FILE), &manifest)?;
    write_json(&out_dir.join(STATS_FILE), &stats)?;
    Ok(stats)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ingest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("a.jsonl");
        std::fs::write(
            &input,
            concat!(
                r#"{"id":"1","user":{"id":"u1","screen_name":"old"},"text":"merhaba","lang":"tr"}"#, "\n",
                r#"{"id":"2","user":{"id":"u2"},"text":"hello","lang":"en"}"#, "\n",
                "garbage\n",
                r#"{"id":"1","user":{"id":"u1"},"text":"merhaba","lang":"tr"}"#, "\n",
                r#"{"id":"3","user":{"id":"u1","screen_name":"new"},"text":"RT","lang":"tr","retweeted_status":{"id":"1","user":{"id":"u1"}}}"#, "\n",
            ),
        )
        .unwrap();
        let out = dir.path().join("corpus");
        let opts = IngestOptions {
            languages: Some(["tr".to_string()].into()),
        };
        let stats = ingest_files(&[input], &out, &opts).unwrap();
        assert_eq!(
            stats,
            IngestStats {
                total: 5,
                kept: 2,
                malformed: 1,
                language_filtered: 1,
                duplicate_ids: 1
            }
        );
        let tweets = read_tweets(&out).unwrap();
        assert_eq!(tweets.len(), 2);
        assert_eq!(tweets[1].origin_id.as_deref(), Some("1"));
        let users = read_users(&out).unwrap();
        assert_eq!(users.len(), 1);
        assert_eq!(users[0].screen_name, "new");
        let m = CorpusManifest::load(&out).unwrap();
        assert_eq!(m.files[0].records, 2);
        assert_eq!(m.files[0].sha256, file_sha256(&out.join(TWEETS_FILE)).unwrap());
    }

    #[test]
    fn manifest_version_checked() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join(MANIFEST_FILE),
            r#"{"schema_version":99,"files":[]}"#,
        )
        .unwrap();
        assert!(matches!(
            CorpusManifest::load(dir.path()),
            Err(Error::VersionMismatch(_))
        ));
    }
}
