//! Staged command-line pipeline over a workspace directory.
//!
//! Every stage reads artifacts written by earlier stages and records its
//! configuration plus input and output digests in `workspace.json`.
//! Nothing time-dependent is written, so re-running a stage with the same
//! inputs and seed reproduces its artifacts byte for byte.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{compare_spaces, load_entities, load_lexicon, render_report, ReportFormat};
use crate::corpus::{self, ingest_files, read_tweets, read_users, IngestOptions, TweetRecord};
use crate::embed::{self, build_vocab_with, NeighborIndex, SubwordConfig, TrainConfig};
use crate::error::{Error, Result};
use crate::stance::{
    default_rules, evaluate_against, load_rules, propagate_to_fixpoint, read_gold_tsv, seed_with_hits, write_gold_tsv,
    write_review, PropagationConfig, Stance, StanceLabeling,
};
use crate::synth::{gen_polarized_corpus, gen_polarized_network, write_statuses, CorpusParams, NetworkParams};
use crate::textprep::{normalize_term, preprocess_tweet, PipelineConfig};

pub const WORKSPACE_FILE: &str = "workspace.json";
pub const WORKSPACE_VERSION: u32 = 1;
pub const CORPUS_DIR: &str = "corpus";
pub const SEEDS_FILE: &str = "seeds.tsv";
pub const CONFLICTS_FILE: &str = "seed_conflicts.txt";
pub const REVIEW_FILE: &str = "seed_review.tsv";
pub const LABELS_FILE: &str = "labels.tsv";
pub const PROPAGATION_FILE: &str = "propagation.json";
/// One line per record of the corpus tweet file, in the same order.
pub const TOKENS_FILE: &str = "tokens.txt";
pub const PIPELINE_FILE: &str = "pipeline.json";
pub const MODELS_DIR: &str = "models";
pub const REPORTS_DIR: &str = "reports";

#[derive(Parser, Debug)]
#[command(name = "stancelens", version, about = "Stance-split embedding pipeline")]
pub struct Cli {
    /// Workspace directory holding all artifacts.
    #[arg(long, env = "STANCELENS_WORKSPACE", default_value = ".", global = true)]
    pub workspace: PathBuf,
    /// Seed for every random choice made by any stage.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse archive JSONL files into the workspace corpus.
    Ingest(IngestArgs),
    /// Label users whose profiles match seed rules.
    SeedLabel(SeedArgs),
    /// Expand seed labels over the retweet graph to a fixpoint.
    Propagate(PropagateArgs),
    /// Tokenize the corpus, or a single text with --text.
    Preprocess(PreprocessArgs),
    /// Train one camp's embedding model.
    Train(TrainArgs),
    /// List nearest neighbors of a term.
    Query(QueryArgs),
    /// Match entity neighbors against a lexicon across models.
    Compare(CompareArgs),
    /// Generate a synthetic two-camp retweet network.
    SynthNet(SynthArgs),
    /// Generate a synthetic two-camp corpus with planted polarity.
    SynthCorpus(SynthArgs),
    /// Score propagated labels against gold labels.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Keep only these language codes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lang: Vec<String>,
}

#[derive(Args, Debug)]
pub struct SeedArgs {
    /// TOML rule file; built-in rules when absent.
    #[arg(long)]
    pub rules: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PropagateArgs {
    #[arg(long, default_value_t = 10)]
    pub threshold: usize,
    #[arg(long, default_value_t = 50)]
    pub max_iter: u32,
}

#[derive(Args, Debug)]
pub struct PreprocessArgs {
    /// TOML pipeline configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the tokens of this text instead of processing the corpus.
    #[arg(long)]
    pub text: Option<String>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    pub group: Stance,
    /// Model name; defaults to the group.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
    #[arg(long, default_value_t = 5)]
    pub epochs: u32,
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    #[arg(long, default_value_t = 5)]
    pub negatives: usize,
    #[arg(long, default_value_t = embed::DEFAULT_MIN_COUNT)]
    pub min_count: u64,
    #[arg(long, default_value_t = embed::DEFAULT_DISCARD_THRESHOLD)]
    pub sample: f64,
    #[arg(long, default_value_t = 2_000_000)]
    pub buckets: u32,
    #[arg(long, default_value_t = 3)]
    pub minn: usize,
    #[arg(long, default_value_t = 6)]
    pub maxn: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Also write a word2vec-style text export.
    #[arg(long)]
    pub export_text: bool,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    /// Model name in the workspace, or a model file path.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub term: String,
    #[arg(long, default_value_t = 2000)]
    pub k: usize,
    /// Write the listing here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// TOML file of `[[entity]]` tables.
    #[arg(long)]
    pub entities: PathBuf,
    /// Only this entity (canonical name before normalization).
    #[arg(long)]
    pub entity: Option<String>,
    /// `surface<TAB>positive|negative` lexicon.
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Models to compare; defaults to the entity's spaces, then pro,anti.
    #[arg(long, value_delimiter = ',')]
    pub models: Vec<String>,
    #[arg(long, default_value_t = 2000)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub max_edit: usize,
    /// Format printed to stdout; both formats are always written.
    #[arg(long, default_value = "markdown")]
    pub format: ReportFormat,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// TOML parameter file; the global seed replaces its rng_seed.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Output directory; defaults to `synth` inside the workspace.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub gold: PathBuf,
    /// Labels to score; defaults to the workspace propagation output.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ArtifactRecord {
    pub config: Value,
    /// Path to sha256 digest.
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceManifest {
    pub schema_version: u32,
    pub seed: u64,
    /// Keyed by stage, plus the model or entity name where a stage
    /// produces several.
    pub stages: BTreeMap<String, ArtifactRecord>,
}

pub struct Workspace {
    pub root: PathBuf,
    pub seed: u64,
}

impl Workspace {
    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    fn require(&self, rel: &str) -> Result<PathBuf> {
        let p = self.path(rel);
        if p.exists() {
            Ok(p)
        } else {
            Err(Error::MissingArtifact(format!(
                "{} (run the stage that produces it first)",
                p.display()
            )))
        }
    }

    /// Paths inside the workspace are recorded relative to it.
    fn display(&self, p: &Path) -> String {
        p.strip_prefix(&self.root).unwrap_or(p).to_string_lossy().into_owned()
    }

    fn digests(&self, paths: &[PathBuf]) -> Result<BTreeMap<String, String>> {
        paths
            .iter()
            .map(|p| Ok((self.display(p), corpus::file_sha256(p)?)))
            .collect()
    }

    pub fn manifest(&self) -> Result<WorkspaceManifest> {
        let p = self.path(WORKSPACE_FILE);
        if !p.exists() {
            return Ok(WorkspaceManifest {
                schema_version: WORKSPACE_VERSION,
                seed: self.seed,
                stages: BTreeMap::new(),
            });
        }
        let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
        let m: WorkspaceManifest = serde_json::from_str(&text)?;
        if m.schema_version != WORKSPACE_VERSION {
            return Err(Error::VersionMismatch(format!(
                "workspace schema {} (expected {WORKSPACE_VERSION})",
                m.schema_version
            )));
        }
        Ok(m)
    }

    fn record(&self, stage: &str, config: Value, inputs: &[PathBuf], outputs: &[PathBuf]) -> Result<()> {
        let mut m = self.manifest()?;
        m.seed = self.seed;
        m.stages.insert(
            stage.to_string(),
            ArtifactRecord {
                config,
                inputs: self.digests(inputs)?,
                outputs: self.digests(outputs)?,
            },
        );
        fs::create_dir_all(&self.root).map_err(|e| Error::io(&self.root, e))?;
        corpus::write_json(&self.path(WORKSPACE_FILE), &m)
    }

    fn pipeline(&self) -> Result<PipelineConfig> {
        let p = self.path(PIPELINE_FILE);
        if !p.exists() {
            return Ok(PipelineConfig::default());
        }
        let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
        let cfg: PipelineConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn model_path(&self, name: &str) -> PathBuf {
        self.path(MODELS_DIR).join(format!("{name}.bin"))
    }

    fn resolve_model(&self, name: &str) -> Result<PathBuf> {
        let p = self.model_path(name);
        if p.exists() {
            return Ok(p);
        }
        let direct = PathBuf::from(name);
        if direct.is_file() {
            return Ok(direct);
        }
        Err(Error::MissingArtifact(format!("model {name:?} (expected {})", p.display())))
    }
}

fn mkdir(p: &Path) -> Result<()> {
    fs::create_dir_all(p).map_err(|e| Error::io(p, e))
}

fn read_toml<T: serde::de::DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn ingest(ws: &Workspace, a: &IngestArgs) -> Result<()> {
    let out = ws.path(CORPUS_DIR);
    let opts = IngestOptions {
        languages: (!a.lang.is_empty()).then(|| a.lang.iter().cloned().collect()),
    };
    let stats = ingest_files(&a.inputs, &out, &opts)?;
    println!(
        "kept {} of {} records ({} malformed, {} language-filtered, {} duplicate ids)",
        stats.kept, stats.total, stats.malformed, stats.language_filtered, stats.duplicate_ids
    );
    let mut langs = a.lang.clone();
    langs.sort();
    ws.record(
        "ingest",
        json!({ "languages": langs }),
        &a.inputs,
        &[out.join(corpus::TWEETS_FILE), out.join(corpus::USERS_FILE)],
    )
}

fn seed_label(ws: &Workspace, a: &SeedArgs) -> Result<()> {
    let users_path = ws.require(&format!("{CORPUS_DIR}/{}", corpus::USERS_FILE))?;
    let rules = match &a.rules {
        Some(p) => load_rules(p)?,
        None => default_rules(),
    };
    let users = read_users(&ws.path(CORPUS_DIR))?;
    let (labeling, hits) = seed_with_hits(&users, &rules);
    let seeds = ws.path(SEEDS_FILE);
    let conflicts = ws.path(CONFLICTS_FILE);
    let review = ws.path(REVIEW_FILE);
    labeling.write_tsv(&seeds)?;
    let text: String = labeling.conflicts.iter().map(|u| format!("{u}\n")).collect();
    fs::write(&conflicts, text).map_err(|e| Error::io(&conflicts, e))?;
    write_review(&review, &hits, &rules)?;
    println!(
        "seeded {} pro, {} anti; {} conflicts",
        labeling.count(Stance::Pro),
        labeling.count(Stance::Anti),
        labeling.conflicts.len()
    );
    let mut inputs = vec![users_path];
    inputs.extend(a.rules.clone());
    ws.record(
        "seed-label",
        json!({ "rules": to_value(&rules)? }),
        &inputs,
        &[seeds, conflicts, review],
    )
}

fn read_seeds(ws: &Workspace) -> Result<(StanceLabeling, Vec<PathBuf>)> {
    let seeds_path = ws.require(SEEDS_FILE)?;
    let mut seeds = StanceLabeling::read_tsv(&seeds_path)?;
    let mut inputs = vec![seeds_path];
    let cp = ws.path(CONFLICTS_FILE);
    if cp.exists() {
        let text = fs::read_to_string(&cp).map_err(|e| Error::io(&cp, e))?;
        seeds.conflicts = text.lines().filter(|l| !l.is_empty()).map(str::to_string).collect();
        inputs.push(cp);
    }
    Ok((seeds, inputs))
}

fn propagate(ws: &Workspace, a: &PropagateArgs) -> Result<()> {
    let cfg = PropagationConfig {
        threshold: a.threshold,
        max_iterations: a.max_iter,
    };
    cfg.validate()?;
    let tweets_path = ws.require(&format!("{CORPUS_DIR}/{}", corpus::TWEETS_FILE))?;
    let (seeds, mut inputs) = read_seeds(ws)?;
    let tweets = read_tweets(&ws.path(CORPUS_DIR))?;
    let index = corpus::build_retweet_index(&tweets);
    let out = propagate_to_fixpoint(&index, &seeds, &cfg);
    let labels = ws.path(LABELS_FILE);
    let summary = ws.path(PROPAGATION_FILE);
    out.labeling.write_tsv(&labels)?;
    let pro = out.labeling.count(Stance::Pro);
    let anti = out.labeling.count(Stance::Anti);
    corpus::write_json(
        &summary,
        &json!({
            "new_labels_per_iteration": out.counts,
            "converged": out.converged,
            "pro": pro,
            "anti": anti,
        }),
    )?;
    println!(
        "{pro} pro, {anti} anti after {} iterations{}",
        out.counts.len(),
        if out.converged { "" } else { " (not converged)" }
    );
    inputs.insert(0, tweets_path);
    ws.record("propagate", to_value(&cfg)?, &inputs, &[labels, summary])
}

fn preprocess(ws: &Workspace, a: &PreprocessArgs) -> Result<()> {
    let cfg = match &a.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(text) = &a.text {
        println!("{}", preprocess_tweet(text, &cfg).join());
        return Ok(());
    }
    let tweets_path = ws.require(&format!("{CORPUS_DIR}/{}", corpus::TWEETS_FILE))?;
    let tweets = read_tweets(&ws.path(CORPUS_DIR))?;
    let tokens = ws.path(TOKENS_FILE);
    let file = fs::File::create(&tokens).map_err(|e| Error::io(&tokens, e))?;
    let mut w = std::io::BufWriter::new(file);
    let mut empty = 0usize;
    for t in &tweets {
        let seq = preprocess_tweet(&t.text, &cfg);
        empty += seq.is_empty() as usize;
        writeln!(w, "{}", seq.join()).map_err(|e| Error::io(&tokens, e))?;
    }
    w.flush().map_err(|e| Error::io(&tokens, e))?;
    let pipeline = ws.path(PIPELINE_FILE);
    corpus::write_json(&pipeline, &cfg)?;
    println!("{} records tokenized, {empty} empty", tweets.len());
    let mut inputs = vec![tweets_path];
    inputs.extend(a.config.clone());
    ws.record("preprocess", to_value(&cfg)?, &inputs, &[tokens, pipeline])
}

/// Token lines of original tweets authored by users labeled `group`.
/// Retweets repeat their original's text and are left out.
pub fn group_lines(tweets: &[TweetRecord], tokens: &str, labels: &StanceLabeling, group: Stance) -> Result<Vec<String>> {
    let lines: Vec<&str> = tokens.lines().collect();
    if lines.len() != tweets.len() {
        return Err(Error::MissingArtifact(format!(
            "{TOKENS_FILE} has {} lines for {} records; rerun preprocess",
            lines.len(),
            tweets.len()
        )));
    }
    Ok(tweets
        .iter()
        .zip(lines)
        .filter(|(t, l)| t.origin_id.is_none() && !l.is_empty() && labels.label_of(&t.author_id) == Some(group))
        .map(|(_, l)| l.to_string())
        .collect())
}

fn train_model(ws: &Workspace, a: &TrainArgs) -> Result<()> {
    let tweets_path = ws.require(&format!("{CORPUS_DIR}/{}", corpus::TWEETS_FILE))?;
    let tokens_path = ws.require(TOKENS_FILE)?;
    let labels_path = ws.require(LABELS_FILE)?;
    let tcfg = TrainConfig {
        dim: a.dim,
        lr: a.lr,
        epochs: a.epochs,
        window: a.window,
        negatives: a.negatives,
        seed: ws.seed,
        workers: a.workers,
    };
    let scfg = SubwordConfig {
        n_min: a.minn,
        n_max: a.maxn,
        bucket_count: a.buckets,
    };
    tcfg.validate()?;
    scfg.validate()?;
    let tweets = read_tweets(&ws.path(CORPUS_DIR))?;
    let tokens = fs::read_to_string(&tokens_path).map_err(|e| Error::io(&tokens_path, e))?;
    let labels = StanceLabeling::read_tsv(&labels_path)?;
    let lines = group_lines(&tweets, &tokens, &labels, a.group)?;
    if lines.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let vocab = build_vocab_with(&lines, a.min_count, a.sample)?;
    let name = a.name.clone().unwrap_or_else(|| a.group.to_string());
    let meta = embed::ModelMeta {
        corpus_id: corpus::file_sha256(&tokens_path)?,
        camp: a.group.to_string(),
    };
    log::info!("training {name}: {} lines, {} words", lines.len(), vocab.len());
    let (model, stats) = embed::train(&lines, vocab, &tcfg, &scfg, meta)?;
    let dir = ws.path(MODELS_DIR);
    mkdir(&dir)?;
    let model_path = ws.model_path(&name);
    embed::save(&model, &model_path)?;
    let stats_path = dir.join(format!("{name}.stats.json"));
    corpus::write_json(&stats_path, &stats)?;
    let mut outputs = vec![model_path, stats_path];
    if a.export_text {
        let p = dir.join(format!("{name}.vec"));
        embed::export_text(&model, &p)?;
        outputs.push(p);
    }
    if let Some(last) = stats.last() {
        println!("{name}: {} words, final epoch mean loss {:.4}", model.vocab.len(), last.mean_loss);
    }
    ws.record(
        &format!("train:{name}"),
        json!({
            "group": a.group,
            "train": tcfg,
            "subword": scfg,
            "min_count": a.min_count,
            "sample": a.sample,
        }),
        &[tweets_path, tokens_path, labels_path],
        &outputs,
    )
}

fn query(ws: &Workspace, a: &QueryArgs) -> Result<()> {
    let path = ws.resolve_model(&a.model)?;
    let model = embed::load(&path)?;
    let term = normalize_term(&a.term, &ws.pipeline()?);
    let nns = NeighborIndex::new(&model).nearest(&term, a.k)?;
    let mut out = String::from("rank\tterm\tcosine\n");
    for r in &nns {
        out.push_str(&format!("{}\t{}\t{:.6}\n", r.rank, r.term, r.cosine));
    }
    match &a.out {
        Some(p) => fs::write(p, out).map_err(|e| Error::io(p, e)),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn compare(ws: &Workspace, a: &CompareArgs) -> Result<()> {
    let cfg = ws.pipeline()?;
    let mut entities = load_entities(&a.entities, &cfg)?;
    if let Some(name) = &a.entity {
        let wanted = normalize_term(name, &cfg);
        entities.retain(|e| e.canonical == wanted);
        if entities.is_empty() {
            return Err(Error::Config(format!("entity {name:?} not found in {}", a.entities.display())));
        }
    }
    let lexicon = load_lexicon(&a.lexicon, &cfg)?;
    let reports = ws.path(REPORTS_DIR);
    mkdir(&reports)?;
    for entity in &entities {
        let names: Vec<String> = if !a.models.is_empty() {
            a.models.clone()
        } else if !entity.spaces.is_empty() {
            entity.spaces.clone()
        } else {
            vec!["pro".into(), "anti".into()]
        };
        let paths = names.iter().map(|n| ws.resolve_model(n)).collect::<Result<Vec<_>>>()?;
        let models = paths.iter().map(|p| embed::load(p)).collect::<Result<Vec<_>>>()?;
        let named: Vec<(String, &embed::EmbeddingModel)> = names.iter().cloned().zip(models.iter()).collect();
        let report = compare_spaces(entity, &named, &lexicon, a.k, a.max_edit)?;
        let json_path = reports.join(format!("{}.json", entity.canonical));
        let md_path = reports.join(format!("{}.md", entity.canonical));
        let json_bytes = render_report(&report, ReportFormat::Json)?;
        let md_bytes = render_report(&report, ReportFormat::Markdown)?;
        fs::write(&json_path, &json_bytes).map_err(|e| Error::io(&json_path, e))?;
        fs::write(&md_path, &md_bytes).map_err(|e| Error::io(&md_path, e))?;
        let shown = match a.format {
            ReportFormat::Json => &json_bytes,
            ReportFormat::Markdown => &md_bytes,
        };
        std::io::stdout()
            .write_all(shown)
            .map_err(|e| Error::io(Path::new("<stdout>"), e))?;
        let mut inputs = vec![a.entities.clone(), a.lexicon.clone()];
        inputs.extend(paths);
        ws.record(
            &format!("compare:{}", entity.canonical),
            json!({ "models": names, "k": a.k, "max_edit": a.max_edit, "pipeline": cfg }),
            &inputs,
            &[json_path, md_path],
        )?;
    }
    Ok(())
}

fn synth_dir(ws: &Workspace, out: &Option<PathBuf>) -> Result<PathBuf> {
    let dir = out.clone().unwrap_or_else(|| ws.path("synth"));
    mkdir(&dir)?;
    Ok(dir)
}

fn synth_net(ws: &Workspace, a: &SynthArgs) -> Result<()> {
    let mut p: NetworkParams = read_toml(a.params.as_deref())?;
    p.rng_seed = ws.seed;
    let net = gen_polarized_network(&p)?;
    let dir = synth_dir(ws, &a.out)?;
    let statuses = dir.join("network.jsonl");
    let gold = dir.join("gold.tsv");
    write_statuses(&statuses, &net.tweets, &net.users)?;
    write_gold_tsv(&gold, &net.gold)?;
    println!("{} users, {} statuses", net.users.len(), net.tweets.len());
    ws.record(
        "synth-net",
        to_value(&p)?,
        &a.params.iter().cloned().collect::<Vec<_>>(),
        &[statuses, gold],
    )
}

fn synth_corpus(ws: &Workspace, a: &SynthArgs) -> Result<()> {
    let mut p: CorpusParams = read_toml(a.params.as_deref())?;
    p.rng_seed = ws.seed;
    let c = gen_polarized_corpus(&p)?;
    let dir = synth_dir(ws, &a.out)?;
    let statuses = dir.join("corpus.jsonl");
    let lexicon = dir.join("lexicon.tsv");
    let entities = dir.join("entities.toml");
    write_statuses(&statuses, &c.to_records(p.users_per_camp), &[])?;
    fs::write(&lexicon, c.lexicon_tsv()).map_err(|e| Error::io(&lexicon, e))?;
    let spec = format!(
        "[[entity]]\ncanonical = \"{}\"\nspaces = [\"pro\", \"anti\"]\n",
        p.entity_token
    );
    fs::write(&entities, spec).map_err(|e| Error::io(&entities, e))?;
    println!("{} + {} sentences, {} lexicon terms", c.camp_a.len(), c.camp_b.len(), c.lexicon.len());
    ws.record(
        "synth-corpus",
        to_value(&p)?,
        &a.params.iter().cloned().collect::<Vec<_>>(),
        &[statuses, lexicon, entities],
    )
}

fn eval(ws: &Workspace, a: &EvalArgs) -> Result<()> {
    let labels_path = match &a.labels {
        Some(p) => p.clone(),
        None => ws.require(LABELS_FILE)?,
    };
    let labels = StanceLabeling::read_tsv(&labels_path)?;
    let gold = read_gold_tsv(&a.gold)?;
    let ev = evaluate_against(&labels, &gold)?;
    println!("{}", serde_json::to_string_pretty(&ev)?);
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    let ws = Workspace {
        root: cli.workspace.clone(),
        seed: cli.seed,
    };
    match &cli.command {
        Command::Ingest(a) => ingest(&ws, a),
        Command::SeedLabel(a) => seed_label(&ws, a),
        Command::Propagate(a) => propagate(&ws, a),
        Command::Preprocess(a) => preprocess(&ws, a),
        Command::Train(a) => train_model(&ws, a),
        Command::Query(a) => query(&ws, a),
        Command::Compare(a) => compare(&ws, a),
        Command::SynthNet(a) => synth_net(&ws, a),
        Command::SynthCorpus(a) => synth_corpus(&ws, a),
        Command::Eval(a) => eval(&ws, a),
    }
}

/// 1 for bad invocations and configuration, 2 for data problems.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParams(_) => 1,
        _ => 2,
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
