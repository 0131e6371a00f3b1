//! Synthetic two-camp populations: retweet networks with planted
//! communities and camp corpora with planted entity–sentiment
//! co-occurrence. Output uses the archive status format so the whole
//! pipeline runs on it unchanged.
//!
//! All randomness comes from ChaCha8 seeded with the parameter seed.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{levenshtein, Polarity};
use crate::corpus::{TweetRecord, UserRecord};
use crate::error::{Error, Result};
use crate::stance::{GoldLabel, Stance};
use crate::textprep::stem;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkParams {
    pub users_per_camp: usize,
    pub seeds_per_camp: usize,
    pub tweets_per_camp: usize,
    pub retweets_per_user: usize,
    pub cross_camp_retweet_prob: f64,
    /// Cross-camp retweets all land on this many of the other camp's
    /// tweets, the way off-camp attention piles onto a few viral posts.
    pub viral_per_camp: usize,
    pub rng_seed: u64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            users_per_camp: 500,
            seeds_per_camp: 20,
            tweets_per_camp: 250,
            retweets_per_user: 12,
            cross_camp_retweet_prob: 0.05,
            viral_per_camp: 1,
            rng_seed: 42,
        }
    }
}

impl NetworkParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.users_per_camp == 0 || self.tweets_per_camp == 0 {
            return bad("users_per_camp and tweets_per_camp must be positive");
        }
        if self.seeds_per_camp > self.users_per_camp {
            return bad("seeds_per_camp exceeds users_per_camp");
        }
        if self.retweets_per_user > self.tweets_per_camp {
            return bad("retweets_per_user exceeds tweets_per_camp");
        }
        if !(0.0..=1.0).contains(&self.cross_camp_retweet_prob) {
            return bad("cross_camp_retweet_prob must lie in [0, 1]");
        }
        if self.viral_per_camp == 0 || self.viral_per_camp > self.tweets_per_camp {
            return bad("viral_per_camp must lie in 1..=tweets_per_camp");
        }
        Ok(())
    }
}

pub const CAMPS: [Stance; 2] = [Stance::Pro, Stance::Anti];

/// `ua00017` for the pro camp, `ub00017` for the anti camp.
pub fn user_id(camp: Stance, i: usize) -> String {
    match camp {
        Stance::Pro => format!("ua{i:05}"),
        Stance::Anti => format!("ub{i:05}"),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SynthNetwork {
    pub users: Vec<UserRecord>,
    pub tweets: Vec<TweetRecord>,
    pub gold: BTreeMap<String, GoldLabel>,
    pub seeds: BTreeSet<String>,
}

fn synth_user(camp: Stance, i: usize, seed: bool) -> UserRecord {
    // seed names trip the default profile rules; the rest match none
    let screen_name = match (seed, camp) {
        (true, Stance::Pro) => format!("akparti_gonullu_{i}"),
        (true, Stance::Anti) => format!("chp_gonullu_{i}"),
        (false, _) => format!("kullanici_{}", user_id(camp, i)),
    };
    UserRecord {
        user_id: user_id(camp, i),
        display_name: screen_name.replace('_', " "),
        screen_name,
        description: String::new(),
    }
}

pub fn gen_polarized_network(p: &NetworkParams) -> Result<SynthNetwork> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed);
    let mut net = SynthNetwork::default();
    // originals[c][j] = (tweet id, author id)
    let mut originals: Vec<Vec<(String, String)>> = vec![Vec::new(), Vec::new()];
    let mut next_id = 0usize;
    let mut new_id = || {
        next_id += 1;
        format!("{next_id}")
    };
    for (c, &camp) in CAMPS.iter().enumerate() {
        for i in 0..p.users_per_camp {
            let seed = i < p.seeds_per_camp;
            let u = synth_user(camp, i, seed);
            if seed {
                net.seeds.insert(u.user_id.clone());
            }
            net.gold.insert(u.user_id.clone(), camp.into());
            net.users.push(u);
        }
        for j in 0..p.tweets_per_camp {
            let author = user_id(camp, rng.gen_range(0..p.users_per_camp));
            let id = new_id();
            net.tweets.push(TweetRecord {
                tweet_id: id.clone(),
                author_id: author.clone(),
                text: format!("gundem {} {j}", camp.as_str()),
                lang: "tr".into(),
                origin_id: None,
                origin_author_id: None,
                created_at: None,
            });
            originals[c].push((id, author));
        }
    }
    let pool: Vec<usize> = (0..p.tweets_per_camp).collect();
    for (c, &camp) in CAMPS.iter().enumerate() {
        for i in 0..p.users_per_camp {
            let uid = user_id(camp, i);
            let picks: Vec<usize> = pool.choose_multiple(&mut rng, p.retweets_per_user).copied().collect();
            for j in picks {
                let target = if rng.gen_bool(p.cross_camp_retweet_prob) {
                    &originals[1 - c][rng.gen_range(0..p.viral_per_camp)]
                } else {
                    &originals[c][j]
                };
                net.tweets.push(TweetRecord {
                    tweet_id: new_id(),
                    author_id: uid.clone(),
                    text: format!("RT {}", target.0),
                    lang: "tr".into(),
                    origin_id: Some(target.0.clone()),
                    origin_author_id: Some(target.1.clone()),
                    created_at: None,
                });
            }
        }
    }
    Ok(net)
}

fn user_json(u: &UserRecord) -> serde_json::Value {
    json!({
        "id_str": u.user_id,
        "screen_name": u.screen_name,
        "name": u.display_name,
        "description": u.description,
    })
}

/// One archive status object; `users` supplies author profiles.
pub fn status_json(t: &TweetRecord, users: &BTreeMap<&str, &UserRecord>) -> serde_json::Value {
    let profile = |id: &str| {
        users.get(id).map(|u| user_json(u)).unwrap_or_else(|| json!({ "id_str": id }))
    };
    let mut v = json!({
        "id_str": t.tweet_id,
        "user": profile(&t.author_id),
        "full_text": t.text,
        "lang": t.lang,
    });
    if let Some(origin) = &t.origin_id {
        let mut rs = json!({ "id_str": origin });
        if let Some(a) = &t.origin_author_id {
            rs["user"] = profile(a);
        }
        v["retweeted_status"] = rs;
    }
    v
}

pub fn write_statuses(path: &Path, tweets: &[TweetRecord], users: &[UserRecord]) -> Result<()> {
    let by_id: BTreeMap<&str, &UserRecord> = users.iter().map(|u| (u.user_id.as_str(), u)).collect();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    for t in tweets {
        serde_json::to_writer(&mut w, &status_json(t, &by_id))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusParams {
    /// Filler vocabulary size, excluding lexicon and entity tokens.
    pub vocab_size: usize,
    /// Sentences per camp.
    pub sentences: usize,
    pub sentence_len: usize,
    pub entity_token: String,
    /// Share of entity mentions paired with a positive term in camp A;
    /// camp B uses the complement.
    pub positive_ratio_camp_a: f64,
    /// Maximum distance between the entity and its sentiment term.
    pub window_cooccurrence: usize,
    /// Share of sentences mentioning the entity.
    pub entity_rate: f64,
    /// The filler vocabulary is split into topics of `topic_size` words and
    /// each sentence draws its filler from one topic. Entity sentences all
    /// use the first topic, so the entity and the terms planted next to it
    /// share contexts. 0 makes the whole filler vocabulary one topic.
    pub topic_size: usize,
    /// Share of other sentences carrying a sentiment term of random
    /// polarity.
    pub background_sentiment_rate: f64,
    pub lexicon_per_polarity: usize,
    /// Authors are drawn from `users_per_camp` synthetic users per camp.
    pub users_per_camp: usize,
    pub rng_seed: u64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            vocab_size: 2000,
            sentences: 20_000,
            sentence_len: 10,
            entity_token: "kilicdaroglu".into(),
            positive_ratio_camp_a: 0.9,
            window_cooccurrence: 2,
            entity_rate: 0.3,
            topic_size: 100,
            background_sentiment_rate: 0.1,
            lexicon_per_polarity: 20,
            users_per_camp: 500,
            rng_seed: 42,
        }
    }
}

impl CorpusParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        for (name, r) in [
            ("positive_ratio_camp_a", self.positive_ratio_camp_a),
            ("entity_rate", self.entity_rate),
            ("background_sentiment_rate", self.background_sentiment_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return bad(format!("{name} must lie in [0, 1]"));
            }
        }
        if self.sentence_len < 2 || self.window_cooccurrence == 0 {
            return bad("sentence_len must be ≥ 2 and window_cooccurrence ≥ 1".into());
        }
        if self.topic_size > self.vocab_size {
            return bad("topic_size exceeds vocab_size".into());
        }
        if self.vocab_size == 0 || self.lexicon_per_polarity == 0 || self.users_per_camp == 0 {
            return bad("vocab_size, lexicon_per_polarity and users_per_camp must be positive".into());
        }
        let e = &self.entity_token;
        if e.len() < 4 || !e.bytes().all(|b| b.is_ascii_lowercase()) || stem(e) != *e {
            return bad(format!(
                "entity_token {e:?} must be ≥ 4 ascii letters and unchanged by the stemmer"
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthCorpus {
    pub camp_a: Vec<String>,
    pub camp_b: Vec<String>,
    pub lexicon: Vec<(String, Polarity)>,
    pub filler: Vec<String>,
}

const CONSONANTS: &[u8] = b"bcdfghklmnprstvyz";
const VOWELS: &[u8] = b"aeiou";

fn random_word(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.gen_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
        w.push(VOWELS[rng.gen_range(0..VOWELS.len())] as char);
        if rng.gen_bool(0.5) {
            w.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
        }
    }
    w
}

/// Distinct random words that the pipeline leaves untouched and that stay
/// at least two edits away from every word in `avoid`.
fn draw_words(rng: &mut ChaCha8Rng, n: usize, avoid: &mut Vec<String>, entity: &str, spaced: bool) -> Vec<String> {
    let mut out = Vec::with_capacity(n);
    let mut seen: BTreeSet<String> = avoid.iter().cloned().collect();
    while out.len() < n {
        let w = random_word(rng);
        if w.len() < 5 || seen.contains(&w) || stem(&w) != w || w.contains(entity) || w == "number" {
            continue;
        }
        if levenshtein(&w, entity) < 2 || avoid.iter().any(|a| levenshtein(&w, a) < 2) {
            continue;
        }
        seen.insert(w.clone());
        if spaced {
            avoid.push(w.clone());
        }
        out.push(w);
    }
    out
}

fn camp_sentences(
    p: &CorpusParams,
    rng: &mut ChaCha8Rng,
    positive_ratio: f64,
    filler: &[String],
    pos: &[String],
    neg: &[String],
) -> Vec<String> {
    let topics: Vec<&[String]> = match p.topic_size {
        0 => vec![filler],
        n => filler.chunks(n).collect(),
    };
    (0..p.sentences)
        .map(|_| {
            let mentions = rng.gen_bool(p.entity_rate);
            let pool = if mentions { topics[0] } else { topics[rng.gen_range(0..topics.len())] };
            let mut words: Vec<&str> = (0..p.sentence_len)
                .map(|_| pool[rng.gen_range(0..pool.len())].as_str())
                .collect();
            if mentions {
                let e = rng.gen_range(0..p.sentence_len);
                let lo = e.saturating_sub(p.window_cooccurrence);
                let hi = (e + p.window_cooccurrence).min(p.sentence_len - 1);
                let s = loop {
                    let s = rng.gen_range(lo..=hi);
                    if s != e {
                        break s;
                    }
                };
                let lex = if rng.gen_bool(positive_ratio) { pos } else { neg };
                words[e] = &p.entity_token;
                words[s] = &lex[rng.gen_range(0..lex.len())];
            } else if rng.gen_bool(p.background_sentiment_rate) {
                let lex = if rng.gen_bool(0.5) { pos } else { neg };
                words[rng.gen_range(0..p.sentence_len)] = &lex[rng.gen_range(0..lex.len())];
            }
            words.join(" ")
        })
        .collect()
}

pub fn gen_polarized_corpus(p: &CorpusParams) -> Result<SynthCorpus> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed);
    let mut avoid = Vec::new();
    let lex_words = draw_words(&mut rng, 2 * p.lexicon_per_polarity, &mut avoid, &p.entity_token, true);
    let (pos, neg) = lex_words.split_at(p.lexicon_per_polarity);
    let filler = draw_words(&mut rng, p.vocab_size, &mut avoid, &p.entity_token, false);
    let camp_a = camp_sentences(p, &mut rng, p.positive_ratio_camp_a, &filler, pos, neg);
    let camp_b = camp_sentences(p, &mut rng, 1.0 - p.positive_ratio_camp_a, &filler, pos, neg);
    let lexicon = pos
        .iter()
        .map(|w| (w.clone(), Polarity::Positive))
        .chain(neg.iter().map(|w| (w.clone(), Polarity::Negative)))
        .collect();
    Ok(SynthCorpus {
        camp_a,
        camp_b,
        lexicon,
        filler,
    })
}

impl SynthCorpus {
    /// Sentences as original tweets authored round-robin by camp users;
    /// camp A belongs to the pro camp.
    pub fn to_records(&self, users_per_camp: usize) -> Vec<TweetRecord> {
        let mut out = Vec::with_capacity(self.camp_a.len() + self.camp_b.len());
        for (camp, sentences) in [(Stance::Pro, &self.camp_a), (Stance::Anti, &self.camp_b)] {
            for (i, s) in sentences.iter().enumerate() {
                out.push(TweetRecord {
                    tweet_id: format!("s{}{i}", &camp.as_str()[..1]),
                    author_id: user_id(camp, i % users_per_camp),
                    text: s.clone(),
                    lang: "tr".into(),
                    origin_id: None,
                    origin_author_id: None,
                    created_at: None,
                });
            }
        }
        out
    }

    pub fn lexicon_tsv(&self) -> String {
        self.lexicon
            .iter()
            .map(|(w, p)| {
                let p = match p {
                    Polarity::Positive => "positive",
                    Polarity::Negative => "negative",
                };
                format!("{w}\t{p}\n")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests;
