//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stancelens::analysis::{
    compare_spaces, levenshtein, parse_lexicon, render_report, EntitySpec, ReportFormat,
};
use stancelens::corpus::{build_retweet_index, TweetRecord};
use stancelens::embed::grad::{pair_gradient, pair_loss};
use stancelens::embed::{
    build_vocab, train, EmbeddingModel, ModelMeta, NeighborIndex, SubwordConfig, TrainConfig, DEFAULT_MIN_COUNT,
};
use stancelens::stance::{
    apply_seed_rules, default_rules, evaluate_against, propagate_to_fixpoint, PropagationConfig, Provenance, Stance,
    StanceLabeling,
};
use stancelens::synth::{gen_polarized_corpus, gen_polarized_network, CorpusParams, NetworkParams};
use stancelens::textprep::{preprocess_tweet, stem, PipelineConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

// ---------------------------------------------------------------- AC1

struct Graph {
    edges: BTreeSet<(usize, usize)>,
    seeds: BTreeMap<usize, Stance>,
    conflicts: BTreeSet<usize>,
    threshold: usize,
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let users = rng.gen_range(1..=50);
    let keys = rng.gen_range(1..=200);
    let threshold = [1, 2, 3, 10][rng.gen_range(0..4)];
    // two loose camps over the key range plus uniform noise
    let split = rng.gen_range(0..=keys);
    let noise = rng.gen_range(0.0..0.3);
    let mut edges = BTreeSet::new();
    for u in 0..users {
        let camp = rng.gen_bool(0.5);
        let degree = rng.gen_range(0..=30);
        for _ in 0..degree {
            let k = if rng.gen_bool(noise) || split == 0 || split == keys {
                rng.gen_range(0..keys)
            } else if camp {
                rng.gen_range(0..split)
            } else {
                rng.gen_range(split..keys)
            };
            edges.insert((u, k));
        }
    }
    let mut seeds = BTreeMap::new();
    let mut conflicts = BTreeSet::new();
    for u in 0..users {
        match rng.gen_range(0..20) {
            0 | 1 => {
                seeds.insert(u, Stance::Pro);
            }
            2 | 3 => {
                seeds.insert(u, Stance::Anti);
            }
            4 => {
                conflicts.insert(u);
            }
            _ => {}
        }
    }
    Graph {
        edges,
        seeds,
        conflicts,
        threshold,
    }
}

/// Re-derives every endorsement from the edge list each round and records
/// the round in which each user was labeled.
fn reference_fixpoint(g: &Graph) -> BTreeMap<usize, (Stance, u32)> {
    let mut labels: BTreeMap<usize, (Stance, u32)> = g.seeds.iter().map(|(&u, &s)| (u, (s, 0))).collect();
    let users: BTreeSet<usize> = g.edges.iter().map(|e| e.0).collect();
    let mut round = 0;
    loop {
        round += 1;
        let mut new = Vec::new();
        for &u in &users {
            if labels.contains_key(&u) || g.conflicts.contains(&u) {
                continue;
            }
            let (mut pro, mut anti) = (0, 0);
            for &(_, k) in g.edges.iter().filter(|e| e.0 == u) {
                let mut camps = BTreeSet::new();
                for &(v, kk) in &g.edges {
                    if kk == k {
                        if let Some((s, _)) = labels.get(&v) {
                            camps.insert(*s);
                        }
                    }
                }
                if camps.len() == 1 {
                    match camps.into_iter().next().unwrap() {
                        Stance::Pro => pro += 1,
                        Stance::Anti => anti += 1,
                    }
                }
            }
            if pro >= g.threshold && anti == 0 {
                new.push((u, Stance::Pro));
            } else if anti >= g.threshold && pro == 0 {
                new.push((u, Stance::Anti));
            }
        }
        if new.is_empty() {
            return labels;
        }
        for (u, s) in new {
            labels.insert(u, (s, round));
        }
    }
}

fn user_name(u: usize) -> String {
    format!("u{u:02}")
}

fn production_fixpoint(g: &Graph) -> BTreeMap<usize, (Stance, u32)> {
    let records: Vec<TweetRecord> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(u, k))| TweetRecord {
            tweet_id: format!("t{i}"),
            author_id: user_name(u),
            text: String::new(),
            lang: "tr".into(),
            origin_id: Some(format!("k{k}")),
            origin_author_id: None,
            created_at: None,
        })
        .collect();
    let index = build_retweet_index(&records);
    let mut seeds = StanceLabeling::default();
    for (&u, &s) in &g.seeds {
        seeds.labels.insert(user_name(u), (s, Provenance::Seed { rule: 0 }));
    }
    seeds.conflicts = g.conflicts.iter().map(|&u| user_name(u)).collect();
    let cfg = PropagationConfig {
        threshold: g.threshold,
        max_iterations: 1000,
    };
    let out = propagate_to_fixpoint(&index, &seeds, &cfg);
    assert!(out.converged);
    out.labeling
        .labels
        .iter()
        .map(|(name, (s, p))| {
            let round = match p {
                Provenance::Seed { .. } => 0,
                Provenance::Propagated { iteration } => *iteration,
            };
            (name[1..].parse().unwrap(), (*s, round))
        })
        .collect()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    let mut propagated = 0;
    for _ in 0..200 {
        let g = random_graph(&mut rng);
        let want = reference_fixpoint(&g);
        let got = production_fixpoint(&g);
        propagated += want.len() - g.seeds.len();
        if want != got {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(30),
        format!("{mismatches}/200 graphs differ, {propagated} propagated labels checked, {elapsed:.1?}"),
    )
}

// ---------------------------------------------------------------- AC2

fn ac2() -> Outcome {
    let mut pass = true;
    let mut worst_share = 1.0f64;
    let mut wrong = 0;
    let mut slowest = Duration::ZERO;
    for seed in 0..10 {
        let start = Instant::now();
        let p = NetworkParams {
            users_per_camp: 500,
            seeds_per_camp: 20,
            retweets_per_user: 12,
            cross_camp_retweet_prob: 0.05,
            rng_seed: seed,
            ..NetworkParams::default()
        };
        let net = gen_polarized_network(&p).unwrap();
        let index = build_retweet_index(&net.tweets);
        let seeds = apply_seed_rules(&net.users, &default_rules());
        let out = propagate_to_fixpoint(&index, &seeds, &PropagationConfig::default());
        let ev = evaluate_against(&out.labeling, &net.gold).unwrap();
        let share = (ev.matched + ev.mismatched) as f64 / net.gold.len() as f64;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        worst_share = worst_share.min(share);
        wrong += ev.mismatched;
        pass &= share >= 0.95 && ev.mismatched == 0 && elapsed < Duration::from_secs(10);
    }
    outcome(
        pass,
        format!(
            "lowest labeled share {:.2}% over 10 seeds, {wrong} wrong-camp labels, slowest seed {slowest:.2?}",
            100.0 * worst_share
        ),
    )
}

// ---------------------------------------------------------------- AC3

fn ac3() -> Outcome {
    let text = std::fs::read_to_string(data_dir().join("data/stem_golden.tsv")).unwrap();
    let pairs: Vec<(&str, &str)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.split_once('\t').unwrap())
        .collect();
    let agree = pairs.iter().filter(|(w, s)| stem(w) == *s).count();
    let root = stem("okullarımızdan");
    let share = agree as f64 / pairs.len() as f64;
    outcome(
        pairs.len() == 1000 && share >= 0.99 && root == "okul",
        format!(
            "{agree}/{} golden stems agree ({:.1}%), okullarımızdan -> {root}",
            pairs.len(),
            100.0 * share
        ),
    )
}

// ---------------------------------------------------------------- AC4

fn rand_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// ‖a − b‖ / max(‖a‖, ‖b‖), the whole parameter block at once.
fn rel_error(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        0.0
    } else {
        norm(&diff) / scale
    }
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = rng.gen_range(1..=8);
        let n_rows = rng.gen_range(1..=6);
        let n_negs = rng.gen_range(1..=5);
        let rows: Vec<Vec<f64>> = (0..n_rows).map(|_| rand_vec(&mut rng, dim)).collect();
        let pos = rand_vec(&mut rng, dim);
        let negs: Vec<Vec<f64>> = (0..n_negs).map(|_| rand_vec(&mut rng, dim)).collect();
        let g = pair_gradient(&rows, &pos, &negs);

        // flatten parameters: rows, pos, negs
        let mut params: Vec<f64> = rows.iter().flatten().copied().collect();
        params.extend(&pos);
        params.extend(negs.iter().flatten());
        let mut analytic: Vec<f64> = g.rows.iter().flatten().copied().collect();
        analytic.extend(&g.pos);
        analytic.extend(g.negs.iter().flatten());
        let unflatten = |p: &[f64]| {
            let rows: Vec<Vec<f64>> = p[..n_rows * dim].chunks(dim).map(|c| c.to_vec()).collect();
            let pos = p[n_rows * dim..(n_rows + 1) * dim].to_vec();
            let negs: Vec<Vec<f64>> = p[(n_rows + 1) * dim..].chunks(dim).map(|c| c.to_vec()).collect();
            pair_loss(&rows, &pos, &negs)
        };
        let numeric: Vec<f64> = (0..params.len())
            .map(|i| {
                let mut p = params.clone();
                p[i] += h;
                let up = unflatten(&p);
                p[i] -= 2.0 * h;
                let down = unflatten(&p);
                (up - down) / (2.0 * h)
            })
            .collect();
        worst = worst.max(rel_error(&analytic, &numeric));
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-4 && elapsed < Duration::from_secs(5),
        format!("worst relative error {worst:.2e} over 100 points, {elapsed:.2?}"),
    )
}

// ---------------------------------------------------------------- AC5, AC8

struct PlantedRun {
    camp_a: EmbeddingModel,
    entity: String,
    medians: [(Option<f64>, Option<f64>); 2],
}

fn planted_run(seed: u64) -> PlantedRun {
    let cfg = PipelineConfig::default();
    let p = CorpusParams {
        vocab_size: 2000,
        sentences: 20_000,
        sentence_len: 10,
        positive_ratio_camp_a: 0.9,
        rng_seed: seed,
        ..CorpusParams::default()
    };
    let corpus = gen_polarized_corpus(&p).unwrap();
    let lexicon = parse_lexicon(&corpus.lexicon_tsv(), &cfg).unwrap();
    let records = corpus.to_records(p.users_per_camp);
    let tcfg = TrainConfig {
        dim: 100,
        lr: 0.05,
        epochs: 5,
        seed,
        workers: 1,
        ..TrainConfig::default()
    };
    let mut models = Vec::new();
    for (camp, prefix) in [("a", "ua"), ("b", "ub")] {
        let lines: Vec<String> = records
            .iter()
            .filter(|r| r.author_id.starts_with(prefix))
            .map(|r| preprocess_tweet(&r.text, &cfg).join())
            .collect();
        let vocab = build_vocab(&lines, DEFAULT_MIN_COUNT).unwrap();
        let meta = ModelMeta {
            corpus_id: format!("planted-{seed}"),
            camp: camp.into(),
        };
        let (m, _) = train(&lines, vocab, &tcfg, &SubwordConfig::default(), meta).unwrap();
        models.push(m);
    }
    let entity = EntitySpec::new(&p.entity_token, &[], &["a", "b"]);
    let named: Vec<(String, &EmbeddingModel)> = vec![("a".into(), &models[0]), ("b".into(), &models[1])];
    let report = compare_spaces(&entity, &named, &lexicon, 2000, 1).unwrap();
    let m = |i: usize| (report.spaces[i].median_positive_rank, report.spaces[i].median_negative_rank);
    let medians = [m(0), m(1)];
    let camp_a = models.swap_remove(0);
    PlantedRun {
        camp_a,
        entity: p.entity_token,
        medians,
    }
}

/// Missing medians rank after everything in the top-k list.
fn rank_or_last(m: Option<f64>) -> f64 {
    m.unwrap_or(f64::INFINITY)
}

fn one_edit(word: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    let pos = rng.gen_range(1..chars.len() - 1);
    let letter = loop {
        let c = (b'a' + rng.gen_range(0..26u8)) as char;
        if c != chars[pos] {
            break c;
        }
    };
    match rng.gen_range(0..3) {
        0 => chars[pos] = letter,
        1 => chars.insert(pos, letter),
        _ => {
            chars.remove(pos);
        }
    }
    chars.into_iter().collect()
}

fn ac5_ac8() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut polarity_ok = 0;
    let mut oov_ok = 0;
    let mut polarity_detail = Vec::new();
    let mut oov_detail = Vec::new();
    for seed in 0..10 {
        let run = planted_run(seed);
        let [(ap, an), (bp, bn)] = run.medians;
        let ok = rank_or_last(ap) < rank_or_last(an) && rank_or_last(bp) > rank_or_last(bn);
        polarity_ok += ok as usize;
        let fmt = |m: Option<f64>| m.map_or("-".to_string(), |v| format!("{v}"));
        polarity_detail.push(format!("A {}/{} B {}/{}", fmt(ap), fmt(an), fmt(bp), fmt(bn)));

        let mut rng = ChaCha8Rng::seed_from_u64(800 + seed);
        let typo = one_edit(&run.entity, &mut rng);
        assert_eq!(levenshtein(&typo, &run.entity), 1);
        let nns = NeighborIndex::new(&run.camp_a).nearest(&typo, 10).unwrap();
        let rank = nns.iter().find(|r| r.term == run.entity).map(|r| r.rank);
        oov_ok += rank.is_some() as usize;
        oov_detail.push(format!("{typo}:{}", rank.map_or("-".into(), |r| r.to_string())));
    }
    let elapsed = start.elapsed();
    let ac5 = outcome(
        polarity_ok >= 9 && elapsed < Duration::from_secs(300),
        format!(
            "{polarity_ok}/10 seeds ordered as planted (pos/neg medians: {}), {elapsed:.1?}",
            polarity_detail.join("; ")
        ),
    );
    let ac8 = outcome(
        oov_ok >= 8,
        format!("{oov_ok}/10 misspellings find the entity in the top 10 ({})", oov_detail.join(", ")),
    );
    (ac5, ac8)
}

// ---------------------------------------------------------------- AC6

/// Full-matrix Wagner–Fischer on bytes.
fn dp_oracle(a: &[u8], b: &[u8]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + (a[i - 1] != b[j - 1]) as usize;
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn all_strings(alphabet: &[u8], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| alphabet.iter().map(move |&c| format!("{s}{}", c as char)))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn ac6() -> Outcome {
    let strings = all_strings(b"abc", 6);
    let mut disagreements = 0usize;
    let mut pairs = 0usize;
    for a in &strings {
        for b in &strings {
            pairs += 1;
            if levenshtein(a, b) != dp_oracle(a.as_bytes(), b.as_bytes()) {
                disagreements += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let word = |rng: &mut ChaCha8Rng| -> String {
        let n = rng.gen_range(0..=10);
        (0..n).map(|_| ['a', 'b', 'ç', 'ı', 'ş', 'z'][rng.gen_range(0..6)]).collect()
    };
    let mut axiom_failures = 0;
    for _ in 0..10_000 {
        let (a, b, c) = (word(&mut rng), word(&mut rng), word(&mut rng));
        let ab = levenshtein(&a, &b);
        let ok = levenshtein(&a, &a) == 0
            && (ab == 0) == (a == b)
            && ab == levenshtein(&b, &a)
            && ab <= levenshtein(&a, &c) + levenshtein(&c, &b)
            && ab <= a.chars().count().max(b.chars().count());
        axiom_failures += !ok as usize;
    }
    outcome(
        disagreements == 0 && axiom_failures == 0,
        format!("{disagreements}/{pairs} exhaustive pairs disagree, {axiom_failures}/10000 axiom violations"),
    )
}

// ---------------------------------------------------------------- AC7

const PIPELINE_ARTIFACTS: [&str; 6] = [
    "models/pro.bin",
    "models/anti.bin",
    "reports/kilicdaroglu.json",
    "reports/kilicdaroglu.md",
    "labels.tsv",
    "workspace.json",
];

fn run_pipeline(ws: &Path) -> Result<(), String> {
    std::fs::create_dir_all(ws).unwrap();
    std::fs::write(ws.join("corpus_params.toml"), "sentences = 4000\n").unwrap();
    let w = ws.to_str().unwrap();
    let synth = format!("{w}/synth");
    let steps: Vec<Vec<String>> = vec![
        vec!["synth-net".into()],
        vec!["synth-corpus".into(), "--params".into(), format!("{w}/corpus_params.toml")],
        vec![
            "ingest".into(),
            format!("{synth}/network.jsonl"),
            format!("{synth}/corpus.jsonl"),
            "--lang".into(),
            "tr".into(),
        ],
        vec!["seed-label".into()],
        vec!["propagate".into(), "--threshold".into(), "10".into(), "--max-iter".into(), "50".into()],
        vec!["preprocess".into()],
        train_args("pro"),
        train_args("anti"),
        vec![
            "compare".into(),
            "--entities".into(),
            format!("{synth}/entities.toml"),
            "--lexicon".into(),
            format!("{synth}/lexicon.tsv"),
            "--format".into(),
            "json".into(),
        ],
    ];
    for step in steps {
        let mut argv = vec!["stancelens".to_string(), "--workspace".into(), w.into(), "--seed".into(), "42".into()];
        argv.extend(step.iter().cloned());
        let code = stancelens::cli::run(&argv);
        if code != 0 {
            return Err(format!("{step:?} exited with {code}"));
        }
    }
    Ok(())
}

fn train_args(group: &str) -> Vec<String> {
    [
        "train", "--group", group, "--dim", "100", "--lr", "0.05", "--epochs", "5", "--workers", "1", "--buckets",
        "200000",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn ac7() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("run1"), dir.path().join("run2"));
    if let Err(e) = run_pipeline(&a).and_then(|_| run_pipeline(&b)) {
        return outcome(false, e);
    }
    let differing: Vec<&str> = PIPELINE_ARTIFACTS
        .iter()
        .copied()
        .filter(|f| std::fs::read(a.join(f)).ok() != std::fs::read(b.join(f)).ok() || !a.join(f).exists())
        .collect();
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} artifacts byte-identical across two runs", PIPELINE_ARTIFACTS.len())
        } else {
            format!("differing or missing: {}", differing.join(", "))
        },
    )
}

// ---------------------------------------------------------------- AC9

fn ac9() -> Outcome {
    let golden = data_dir().join("golden");
    let report = common::golden_report();
    let mut mismatched = Vec::new();
    for (format, file) in [(ReportFormat::Markdown, "report.md"), (ReportFormat::Json, "report.json")] {
        let want = std::fs::read(golden.join(file)).unwrap();
        if render_report(&report, format).unwrap() != want {
            mismatched.push(file);
        }
    }
    outcome(
        mismatched.is_empty(),
        if mismatched.is_empty() {
            "markdown and json renderings match the golden files".to_string()
        } else {
            format!("mismatch: {}", mismatched.join(", "))
        },
    )
}

fn main() {
    let mut results: Vec<(&str, &str, Outcome)> = Vec::new();
    let mut report = |id, name, o: Outcome| {
        println!(
            "{} {id} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((id, name, o));
    };
    report("AC1", "propagation matches brute-force reference", ac1());
    report("AC2", "community recovery on planted networks", ac2());
    report("AC3", "stemmer agrees with the reference golden list", ac3());
    report("AC4", "negative-sampling gradient check", ac4());
    let (ac5, ac8) = ac5_ac8();
    report("AC5", "planted polarity recovered end to end", ac5);
    report("AC6", "levenshtein oracle and metric axioms", ac6());
    report("AC7", "pipeline determinism", ac7());
    report("AC8", "misspelled entity finds the true entity", ac8);
    report("AC9", "report rendering matches golden files", ac9());
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
