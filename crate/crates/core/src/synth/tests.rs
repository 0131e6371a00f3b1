use super::*;
use crate::corpus::{build_retweet_index, parse_tweet_line};
use crate::stance::{apply_seed_rules, default_rules, evaluate_against, propagate_to_fixpoint, PropagationConfig};
use crate::textprep::{preprocess_tweet, PipelineConfig};

fn small_net(p: f64, seed: u64) -> NetworkParams {
    NetworkParams {
        users_per_camp: 60,
        seeds_per_camp: 6,
        tweets_per_camp: 40,
        retweets_per_user: 12,
        cross_camp_retweet_prob: p,
        viral_per_camp: 1,
        rng_seed: seed,
    }
}

fn recover(net: &SynthNetwork) -> crate::stance::Evaluation {
    let index = build_retweet_index(&net.tweets);
    let seeds = apply_seed_rules(&net.users, &default_rules());
    assert_eq!(seeds.labels.len(), net.seeds.len());
    assert!(seeds.conflicts.is_empty());
    let out = propagate_to_fixpoint(&index, &seeds, &PropagationConfig::default());
    assert!(out.converged);
    evaluate_against(&out.labeling, &net.gold).unwrap()
}

#[test]
fn network_is_deterministic() {
    let a = gen_polarized_network(&small_net(0.1, 7)).unwrap();
    let b = gen_polarized_network(&small_net(0.1, 7)).unwrap();
    assert_eq!(a, b);
    let c = gen_polarized_network(&small_net(0.1, 8)).unwrap();
    assert_ne!(a.tweets, c.tweets);
}

#[test]
fn network_shape() {
    let p = small_net(0.2, 1);
    let net = gen_polarized_network(&p).unwrap();
    assert_eq!(net.users.len(), 120);
    assert_eq!(net.gold.len(), 120);
    assert_eq!(net.seeds.len(), 12);
    assert_eq!(net.tweets.len(), 2 * 40 + 120 * 12);
    let ids: BTreeSet<&str> = net.tweets.iter().map(|t| t.tweet_id.as_str()).collect();
    assert_eq!(ids.len(), net.tweets.len());
    let texts: BTreeSet<&str> = net.tweets.iter().filter(|t| t.origin_id.is_none()).map(|t| t.text.as_str()).collect();
    assert_eq!(texts.len(), 80);
    // retweets are distinct per user when nothing crosses over
    let net0 = gen_polarized_network(&small_net(0.0, 1)).unwrap();
    for u in &net0.users {
        let targets: BTreeSet<_> = net0
            .tweets
            .iter()
            .filter(|t| t.author_id == u.user_id && t.origin_id.is_some())
            .map(|t| t.origin_id.clone())
            .collect();
        assert_eq!(targets.len(), 12);
    }
}

#[test]
fn no_crossing_recovers_everyone() {
    let net = gen_polarized_network(&small_net(0.0, 3)).unwrap();
    let ev = recover(&net);
    assert_eq!(ev.mismatched, 0);
    assert_eq!(ev.unlabeled, 0);
    assert_eq!(ev.matched, 120);
}

#[test]
fn light_crossing_never_mislabels() {
    for seed in 0..5 {
        let net = gen_polarized_network(&small_net(0.05, seed)).unwrap();
        let ev = recover(&net);
        assert_eq!(ev.mismatched, 0, "seed {seed}");
    }
}

#[test]
fn network_validation() {
    let base = NetworkParams::default();
    for bad in [
        NetworkParams { users_per_camp: 0, ..base },
        NetworkParams { seeds_per_camp: 501, ..base },
        NetworkParams { retweets_per_user: 251, ..base },
        NetworkParams { cross_camp_retweet_prob: 1.5, ..base },
        NetworkParams { viral_per_camp: 0, ..base },
    ] {
        assert!(matches!(gen_polarized_network(&bad), Err(Error::InvalidParams(_))), "{bad:?}");
    }
}

#[test]
fn statuses_parse_back() {
    let net = gen_polarized_network(&small_net(0.3, 2)).unwrap();
    let by_id: BTreeMap<&str, &UserRecord> = net.users.iter().map(|u| (u.user_id.as_str(), u)).collect();
    for t in &net.tweets {
        let line = status_json(t, &by_id).to_string();
        let parsed = parse_tweet_line(&line).unwrap();
        assert_eq!(parsed.tweet, *t);
        assert_eq!(parsed.user.user_id, t.author_id);
    }
}

fn small_corpus(ratio: f64, seed: u64) -> CorpusParams {
    CorpusParams {
        vocab_size: 300,
        sentences: 2000,
        positive_ratio_camp_a: ratio,
        rng_seed: seed,
        ..CorpusParams::default()
    }
}

fn cooccurrences(sentences: &[String], entity: &str, words: &BTreeSet<&str>, window: usize) -> usize {
    let mut n = 0;
    for s in sentences {
        let toks: Vec<&str> = s.split(' ').collect();
        for (i, t) in toks.iter().enumerate() {
            if *t != entity {
                continue;
            }
            let lo = i.saturating_sub(window);
            let hi = (i + window).min(toks.len() - 1);
            n += (lo..=hi).filter(|&j| j != i && words.contains(toks[j])).count();
        }
    }
    n
}

#[test]
fn corpus_plants_polarity() {
    let p = small_corpus(1.0, 4);
    let c = gen_polarized_corpus(&p).unwrap();
    let pos: BTreeSet<&str> = c.lexicon.iter().filter(|l| l.1 == Polarity::Positive).map(|l| l.0.as_str()).collect();
    let neg: BTreeSet<&str> = c.lexicon.iter().filter(|l| l.1 == Polarity::Negative).map(|l| l.0.as_str()).collect();
    let e = &p.entity_token;
    assert_eq!(cooccurrences(&c.camp_a, e, &neg, 0), 0);
    // background sentiment may land next to the entity by chance, the
    // planted pairing never does
    let a_pos = cooccurrences(&c.camp_a, e, &pos, 2);
    let b_neg = cooccurrences(&c.camp_b, e, &neg, 2);
    assert!(a_pos >= 500 && b_neg >= 500, "{a_pos} {b_neg}");
    assert!(cooccurrences(&c.camp_a, e, &neg, 2) * 20 < a_pos);
    assert!(cooccurrences(&c.camp_b, e, &pos, 2) * 20 < b_neg);
}

#[test]
fn corpus_words_survive_preprocessing() {
    let c = gen_polarized_corpus(&small_corpus(0.9, 5)).unwrap();
    let cfg = PipelineConfig::default();
    for s in c.camp_a.iter().chain(&c.camp_b).take(500) {
        assert_eq!(preprocess_tweet(s, &cfg).join(), *s);
    }
    let lex: Vec<&str> = c.lexicon.iter().map(|l| l.0.as_str()).collect();
    for (i, a) in lex.iter().enumerate() {
        for b in &lex[i + 1..] {
            assert!(levenshtein(a, b) >= 2, "{a} {b}");
        }
        for f in &c.filler {
            assert!(levenshtein(a, f) >= 2, "{a} {f}");
        }
    }
    assert_eq!(c.filler.len(), 300);
    assert_eq!(lex.len(), 40);
    let parsed = crate::analysis::parse_lexicon(&c.lexicon_tsv(), &cfg).unwrap();
    assert_eq!(parsed.entries.len(), 40);
    assert!(parsed.entries.iter().all(|e| e.normalized == e.surface));
}

#[test]
fn corpus_records_and_determinism() {
    let p = small_corpus(0.8, 6);
    let c = gen_polarized_corpus(&p).unwrap();
    assert_eq!(c, gen_polarized_corpus(&p).unwrap());
    let recs = c.to_records(7);
    assert_eq!(recs.len(), 4000);
    assert_eq!(recs[0].author_id, "ua00000");
    assert_eq!(recs[2007].author_id, "ub00000");
    let ids: BTreeSet<&str> = recs.iter().map(|r| r.tweet_id.as_str()).collect();
    assert_eq!(ids.len(), 4000);
}

#[test]
fn corpus_validation() {
    for bad in [
        CorpusParams { entity_token: "erdogan".into(), ..CorpusParams::default() },
        CorpusParams { entity_token: "Kilic".into(), ..CorpusParams::default() },
        CorpusParams { positive_ratio_camp_a: -0.1, ..CorpusParams::default() },
        CorpusParams { sentence_len: 1, ..CorpusParams::default() },
        CorpusParams { vocab_size: 0, ..CorpusParams::default() },
    ] {
        assert!(matches!(gen_polarized_corpus(&bad), Err(Error::InvalidParams(_))), "{bad:?}");
    }
}
