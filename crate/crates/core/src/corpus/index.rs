use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{content_key, ContentKey, KeyKind, TweetRecord};

/// Maps retweet origin ids to the content key of the original status when
/// the original itself is part of the corpus, so that an original, its
/// retweets and verbatim copies all collapse onto one key.
#[derive(Clone, Debug, Default)]
pub struct OriginAliases {
    originals: HashMap<String, ContentKey>,
}

impl OriginAliases {
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a TweetRecord>) -> Self {
        let originals = records
            .into_iter()
            .filter(|r| r.origin_id.is_none())
            .map(|r| (r.tweet_id.clone(), content_key(r)))
            .collect();
        OriginAliases { originals }
    }

    pub fn canonical(&self, key: ContentKey) -> ContentKey {
        if key.kind == KeyKind::Origin {
            if let Some(k) = self.originals.get(&key.value) {
                return k.clone();
            }
        }
        key
    }
}

/// Shard-local accumulator; shards are combined with [`IndexBuilder::merge`].
#[derive(Clone, Debug, Default)]
pub struct IndexBuilder {
    user_keys: BTreeMap<String, BTreeSet<ContentKey>>,
}

impl IndexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, user: &str, key: ContentKey) {
        self.user_keys.entry(user.to_string()).or_default().insert(key);
    }

    /// Associate the record's author (and the retweeted author, when
    /// known) with the record's canonical content key.
    pub fn add_record(&mut self, r: &TweetRecord, aliases: &OriginAliases) {
        let key = aliases.canonical(content_key(r));
        if let Some(origin_author) = &r.origin_author_id {
            self.insert(origin_author, key.clone());
        }
        self.insert(&r.author_id, key);
    }

    pub fn merge(&mut self, other: IndexBuilder) {
        for (user, keys) in other.user_keys {
            self.user_keys.entry(user).or_default().extend(keys);
        }
    }

    pub fn finish(self) -> RetweetIndex {
        let all_keys: BTreeSet<&ContentKey> = self.user_keys.values().flatten().collect();
        let keys: Vec<ContentKey> = all_keys.into_iter().cloned().collect();
        let key_lookup: HashMap<ContentKey, u32> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i as u32))
            .collect();
        let mut users = Vec::with_capacity(self.user_keys.len());
        let mut user_keys = Vec::with_capacity(self.user_keys.len());
        let mut key_users = vec![Vec::new(); keys.len()];
        for (uid, (user, ks)) in self.user_keys.into_iter().enumerate() {
            let ids: Vec<u32> = ks.iter().map(|k| key_lookup[k]).collect();
            for &k in &ids {
                key_users[k as usize].push(uid as u32);
            }
            users.push(user);
            user_keys.push(ids);
        }
        let user_lookup = users
            .iter()
            .enumerate()
            .map(|(i, u)| (u.clone(), i as u32))
            .collect();
        RetweetIndex {
            users,
            user_lookup,
            keys,
            key_lookup,
            user_keys,
            key_users,
        }
    }
}

/// Bidirectional user ⇄ content-key endorsement index.
///
/// Users and keys are interned in sorted order, so ids are stable for a
/// given set of associations regardless of insertion order.
#[derive(Clone, Debug, Default)]
pub struct RetweetIndex {
    users: Vec<String>,
    user_lookup: HashMap<String, u32>,
    keys: Vec<ContentKey>,
    key_lookup: HashMap<ContentKey, u32>,
    user_keys: Vec<Vec<u32>>,
    key_users: Vec<Vec<u32>>,
}

impl RetweetIndex {
    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_keys(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn users(&self) -> impl Iterator<Item = &str> {
        self.users.iter().map(String::as_str)
    }

    pub fn keys_of(&self, user: &str) -> Vec<&ContentKey> {
        self.user_lookup
            .get(user)
            .map(|&u| {
                self.user_keys[u as usize]
                    .iter()
                    .map(|&k| &self.keys[k as usize])
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn users_of(&self, key: &ContentKey) -> Vec<&str> {
        self.key_lookup
            .get(key)
            .map(|&k| {
                self.key_users[k as usize]
                    .iter()
                    .map(|&u| self.users[u as usize].as_str())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub(crate) fn user_name(&self, idx: usize) -> &str {
        &self.users[idx]
    }

    pub(crate) fn user_key_ids(&self, idx: usize) -> &[u32] {
        &self.user_keys[idx]
    }
}

/// Build the index over a batch of records, resolving retweet origins to
/// in-corpus originals first.
pub fn build_retweet_index(records: &[TweetRecord]) -> RetweetIndex {
    let aliases = OriginAliases::from_records(records);
    let mut builder = IndexBuilder::new();
    for r in records {
        builder.add_record(r, &aliases);
    }
    builder.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rt(id: &str, author: &str, origin: &str) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            author_id: author.into(),
            text: format!("RT {origin}"),
            lang: "tr".into(),
            origin_id: Some(origin.into()),
            origin_author_id: None,
            created_at: None,
        }
    }

    fn original(id: &str, author: &str, text: &str) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            author_id: author.into(),
            text: text.into(),
            lang: "tr".into(),
            origin_id: None,
            origin_author_id: None,
            created_at: None,
        }
    }

    #[test]
    fn empty_index() {
        let idx = build_retweet_index(&[]);
        assert!(idx.is_empty());
        assert_eq!(idx.num_keys(), 0);
    }

    #[test]
    fn set_semantics() {
        let idx = build_retweet_index(&[rt("1", "u", "9"), rt("2", "u", "9")]);
        assert_eq!(idx.keys_of("u"), vec![&ContentKey::origin("9")]);
    }

    #[test]
    fn three_retweeters() {
        let idx = build_retweet_index(&[rt("1", "a", "9"), rt("2", "b", "9"), rt("3", "c", "9")]);
        assert_eq!(idx.users_of(&ContentKey::origin("9")), vec!["a", "b", "c"]);
    }

    #[test]
    fn originals_retweets_and_copies_share_a_key() {
        let mut r = rt("2", "b", "1");
        r.origin_author_id = Some("a".into());
        let records = vec![original("1", "a", "Oy  verin"), r, original("3", "c", "oy verin")];
        let idx = build_retweet_index(&records);
        assert_eq!(idx.num_keys(), 1);
        let key = idx.keys_of("a")[0].clone();
        assert_eq!(key.kind, KeyKind::TextHash);
        assert_eq!(idx.users_of(&key), vec!["a", "b", "c"]);
    }

    #[test]
    fn retweeted_author_endorses_unseen_original() {
        let mut r = rt("2", "b", "77");
        r.origin_author_id = Some("a".into());
        let idx = build_retweet_index(&[r]);
        assert_eq!(idx.users_of(&ContentKey::origin("77")), vec!["a", "b"]);
    }

    #[test]
    fn merge_equals_single_pass() {
        let records: Vec<_> = (0..20)
            .map(|i| rt(&i.to_string(), &format!("u{}", i % 4), &format!("o{}", i % 7)))
            .collect();
        let aliases = OriginAliases::from_records(&records);
        let mut left = IndexBuilder::new();
        let mut right = IndexBuilder::new();
        for r in &records[..9] {
            left.add_record(r, &aliases);
        }
        for r in &records[9..] {
            right.add_record(r, &aliases);
        }
        left.merge(right);
        let merged = left.finish();
        let single = build_retweet_index(&records);
        for u in single.users() {
            assert_eq!(merged.keys_of(u), single.keys_of(u));
        }
    }

    proptest! {
        #[test]
        fn inverse_index(pairs in proptest::collection::vec((0u8..12, 0u8..15), 0..80)) {
            let mut b = IndexBuilder::new();
            for (u, k) in &pairs {
                b.insert(&format!("u{u}"), ContentKey::origin(format!("k{k}")));
            }
            let idx = b.finish();
            for u in idx.users() {
                let keys = idx.keys_of(u);
                let unique: BTreeSet<_> = keys.iter().collect();
                prop_assert_eq!(unique.len(), keys.len());
                for k in keys {
                    prop_assert!(idx.users_of(k).contains(&u));
                }
            }
            for (u, k) in &pairs {
                let key = ContentKey::origin(format!("k{k}"));
                let user = format!("u{u}");
                prop_assert!(idx.users_of(&key).contains(&user.as_str()));
            }
            let total_user_side: usize = idx.users().map(|u| idx.keys_of(u).len()).sum();
            let distinct_keys: BTreeSet<u8> = pairs.iter().map(|p| p.1).collect();
            let total_key_side: usize = distinct_keys
                .iter()
                .map(|k| idx.users_of(&ContentKey::origin(format!("k{k}"))).len())
                .sum();
            prop_assert_eq!(total_user_side, total_key_side);
        }
    }
}
