//! `stance` — command-line pipeline for stance-detection experiments.
//!
//! Subcommands mirror the pipeline stages: `split` a corpus by target,
//! `tag` tweets with the trigram-HMM tagger, `featurize` into one of six
//! feature schemes, `train`/`predict`/`eval` a learner, `sweep-k` the k-NN
//! neighborhood size, run a whole `experiment` matrix from a config file,
//! or print majority-class `baseline`s.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use stance_core::conll::ConllColumns;
use stance_core::corpus::{
    load_corpus, majority_class, save_corpus, split_by_target, tokenize_with, ColumnSpec, Corpus,
    Delimiter, SentimentLabel, StanceLabel, TokenizeOptions,
};
use stance_core::features::{
    build_vocab, header_path, read_feature_file, vectorize, write_feature_file, CorpusItems,
    FeatureScheme, TweetItems, VectorizeAux,
};
use stance_core::forest::{fit_forest, load_forest, predict_forest, save_forest, ForestConfig, MaxFeatures};
use stance_core::harness::{
    accuracy, emit_k_sweep, emit_report, run_experiment, ExperimentConfig, ReportFormat,
};
use stance_core::lexicons::arguing::{parse_arguing, ArguingLexicon};
use stance_core::lexicons::mpqa::{parse_mpqa, MpqaLexicon};
use stance_core::mbl::{
    classify, fit, load_knn_model, save_knn_model, sweep_k, weights_for, KnnConfig,
    NeighborSemantics, TieBreak, Weighting,
};
use stance_core::tagger::{
    load_model, load_tagged, save_model, save_tagged, train_tagger, TagModel, TaggedToken,
};

#[derive(Parser)]
#[command(name = "stance", version, about = "Stance detection experiment pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelimiterArg {
    Tab,
    Comma,
}

#[derive(Args)]
struct ColumnArgs {
    /// Field delimiter of the corpus file
    #[arg(long, value_enum, default_value = "tab")]
    delimiter: DelimiterArg,
    #[arg(long, default_value_t = 0)]
    id_column: usize,
    #[arg(long, default_value_t = 1)]
    target_column: usize,
    #[arg(long, default_value_t = 2)]
    text_column: usize,
    #[arg(long, default_value_t = 3)]
    stance_column: usize,
    /// Column holding the sentiment label, if the corpus has one
    #[arg(long)]
    sentiment_column: Option<usize>,
}

impl ColumnArgs {
    fn spec(&self) -> ColumnSpec {
        ColumnSpec {
            delimiter: match self.delimiter {
                DelimiterArg::Tab => Delimiter::Tab,
                DelimiterArg::Comma => Delimiter::Comma,
            },
            id: self.id_column,
            target: self.target_column,
            text: self.text_column,
            stance: self.stance_column,
            sentiment: self.sentiment_column,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightingArg {
    GainRatio,
    None,
}

impl From<WeightingArg> for Weighting {
    fn from(w: WeightingArg) -> Weighting {
        match w {
            WeightingArg::GainRatio => Weighting::GainRatio,
            WeightingArg::None => Weighting::None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    KNearestDistances,
    KNearestInstances,
}

impl From<SemanticsArg> for NeighborSemantics {
    fn from(s: SemanticsArg) -> NeighborSemantics {
        match s {
            SemanticsArg::KNearestDistances => NeighborSemantics::KNearestDistances,
            SemanticsArg::KNearestInstances => NeighborSemantics::KNearestInstances,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MaxFeaturesArg {
    Sqrt,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum LearnerArg {
    Knn,
    Forest,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Split a corpus into one file per target
    Split {
        /// Corpus file to split
        #[arg(long)]
        input: PathBuf,
        /// Directory for the per-target files
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        columns: ColumnArgs,
    },
    /// POS-tag a corpus (one tagged sentence per tweet)
    Tag {
        /// Corpus file with the tweets to tag
        #[arg(long)]
        input: PathBuf,
        /// Existing tagger model
        #[arg(long, conflicts_with = "train_tagged")]
        model: Option<PathBuf>,
        /// Tagged corpus to train a fresh model on
        #[arg(long, required_unless_present = "model")]
        train_tagged: Option<PathBuf>,
        /// Where to save the freshly trained model
        #[arg(long, requires = "train_tagged")]
        save_model: Option<PathBuf>,
        /// Tagged output file
        #[arg(long)]
        out: PathBuf,
        /// Keep `#`/`@` prefixes on tokens
        #[arg(long)]
        keep_hashtags: bool,
        #[command(flatten)]
        columns: ColumnArgs,
    },
    /// Build feature vectors for a corpus under one scheme
    Featurize {
        /// Corpus file (labels, targets, sentiment)
        #[arg(long)]
        corpus: PathBuf,
        /// Tagged file aligned one sentence per tweet (BOW schemes)
        #[arg(long)]
        tagged: Option<PathBuf>,
        /// CoNLL parse file (DEP_TRIPLES)
        #[arg(long)]
        conll: Option<PathBuf>,
        /// Sentence-count sidecar aligning parses to tweets
        #[arg(long)]
        conll_index: Option<PathBuf>,
        /// CoNLL column preset: conllx or corenlp
        #[arg(long, default_value = "conllx")]
        conll_columns: String,
        /// Feature scheme name (e.g. BOW_3POS)
        #[arg(long)]
        scheme: String,
        /// Existing vocabulary header; when absent the vocabulary is built
        /// from this corpus
        #[arg(long)]
        vocab: Option<PathBuf>,
        /// MPQA subjectivity lexicon file
        #[arg(long)]
        mpqa: Option<PathBuf>,
        /// Directory of arguing pattern files
        #[arg(long)]
        arguing_patterns_dir: Option<PathBuf>,
        /// Directory of arguing macro files
        #[arg(long)]
        arguing_macros_dir: Option<PathBuf>,
        /// Count unmatched in-tweet words as 1 under MPQA_WEIGHTED
        #[arg(long)]
        mpqa_presence_fallback: bool,
        /// Output feature file (a `.header` sidecar is written next to it)
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        columns: ColumnArgs,
    },
    /// Train a learner on a feature file
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, value_enum)]
        learner: LearnerArg,
        #[arg(long)]
        out: PathBuf,
        /// k-NN neighborhood size
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value = "gain-ratio")]
        weighting: WeightingArg,
        #[arg(long, value_enum, default_value = "k-nearest-distances")]
        neighbor_semantics: SemanticsArg,
        #[arg(long, default_value_t = 10)]
        n_trees: usize,
        #[arg(long, value_enum, default_value = "sqrt")]
        max_features: MaxFeaturesArg,
        /// Disable bootstrap sampling
        #[arg(long)]
        no_bootstrap: bool,
        #[arg(long, default_value_t = 2)]
        min_samples_split: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Predict labels for a feature file with a saved model
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: PathBuf,
        /// Output file, one label per line
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare a prediction file against the gold labels of a feature file
    Eval {
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        gold: PathBuf,
    },
    /// Accuracy across a list of k values
    SweepK {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        /// Comma-separated k values, e.g. 1,3,5,13
        #[arg(long)]
        k_values: String,
        #[arg(long, value_enum, default_value = "gain-ratio")]
        weighting: WeightingArg,
        #[arg(long, value_enum, default_value = "k-nearest-distances")]
        neighbor_semantics: SemanticsArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full experiment matrix from a config file
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's output directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's report format
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Majority-class baseline of a corpus
    Baseline {
        #[arg(long)]
        input: PathBuf,
        /// Report one baseline per target instead of the whole corpus
        #[arg(long)]
        by_target: bool,
        #[command(flatten)]
        columns: ColumnArgs,
    },
}

fn slugify(target: &str) -> String {
    let mut slug = String::new();
    let mut last_underscore = true;
    for c in target.chars() {
        if c.is_alphanumeric() {
            slug.extend(c.to_lowercase());
            last_underscore = false;
        } else if !last_underscore {
            slug.push('_');
            last_underscore = true;
        }
    }
    slug.trim_end_matches('_').to_string()
}

fn cmd_split(input: &Path, out_dir: &Path, spec: &ColumnSpec) -> Result<()> {
    let corpus = load_corpus(input, spec)?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let parts = split_by_target(&corpus);
    for (target, part) in &parts {
        let path = out_dir.join(format!("{}.tsv", slugify(target)));
        save_corpus(part, &path, spec)?;
        println!("{target}\t{}\t{}", part.len(), path.display());
    }
    Ok(())
}

fn tag_corpus(
    corpus: &Corpus,
    model: &TagModel,
    opts: TokenizeOptions,
) -> Result<Vec<Vec<TaggedToken>>> {
    let mut sentences = Vec::with_capacity(corpus.len());
    for tweet in corpus.tweets() {
        let tokens = tokenize_with(&tweet.text, opts);
        if tokens.is_empty() {
            bail!(
                "tweet {} tokenizes to nothing; cannot emit an aligned sentence",
                tweet.id
            );
        }
        sentences.push(model.tag(&tokens)?);
    }
    Ok(sentences)
}

#[allow(clippy::too_many_arguments)]
fn cmd_tag(
    input: &Path,
    model_path: Option<&Path>,
    train_tagged: Option<&Path>,
    save_model_path: Option<&Path>,
    out: &Path,
    keep_hashtags: bool,
    spec: &ColumnSpec,
) -> Result<()> {
    let model = match (model_path, train_tagged) {
        (Some(path), _) => load_model(path)?,
        (None, Some(path)) => train_tagger(&load_tagged(path)?)?,
        (None, None) => bail!("either --model or --train-tagged is required"),
    };
    if let Some(path) = save_model_path {
        save_model(&model, path)?;
    }
    let corpus = load_corpus(input, spec)?;
    let opts = TokenizeOptions {
        strip_hashtags: !keep_hashtags,
    };
    let sentences = tag_corpus(&corpus, &model, opts)?;
    save_tagged(&sentences, out)?;
    println!("tagged {} tweets -> {}", sentences.len(), out.display());
    Ok(())
}

struct FeaturizeInputs {
    corpus: Corpus,
    tagged: Option<Vec<Vec<TaggedToken>>>,
    triples: Option<Vec<Vec<stance_core::conll::DepTriple>>>,
    mpqa: Option<MpqaLexicon>,
    arguing: Option<ArguingLexicon>,
}

fn dir_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

#[allow(clippy::too_many_arguments)]
fn cmd_featurize(
    corpus_path: &Path,
    tagged: Option<&Path>,
    conll: Option<&Path>,
    conll_index: Option<&Path>,
    conll_columns: &str,
    scheme_name: &str,
    vocab_path: Option<&Path>,
    mpqa_path: Option<&Path>,
    arguing_patterns_dir: Option<&Path>,
    arguing_macros_dir: Option<&Path>,
    mpqa_presence_fallback: bool,
    out: &Path,
    spec: &ColumnSpec,
) -> Result<()> {
    let scheme: FeatureScheme = scheme_name.parse()?;
    let corpus = load_corpus(corpus_path, spec)?;

    let inputs = FeaturizeInputs {
        tagged: match tagged {
            Some(path) => {
                let sentences = load_tagged(path)?;
                if sentences.len() != corpus.len() {
                    bail!(
                        "tagged file has {} sentences but the corpus has {} tweets",
                        sentences.len(),
                        corpus.len()
                    );
                }
                Some(sentences)
            }
            None => None,
        },
        triples: match (conll, conll_index) {
            (Some(conll_path), Some(index_path)) => {
                let columns = ConllColumns::preset(conll_columns)
                    .with_context(|| format!("unknown conll column preset {conll_columns:?}"))?;
                let sentences = stance_core::conll::load_conll(conll_path, &columns)?;
                let counts = stance_core::conll::load_alignment(index_path)?;
                if counts.len() != corpus.len() {
                    bail!(
                        "alignment sidecar lists {} tweets but the corpus has {}",
                        counts.len(),
                        corpus.len()
                    );
                }
                let groups = stance_core::conll::group_sentences(sentences, &counts)?;
                Some(
                    groups
                        .iter()
                        .map(|g| {
                            g.iter()
                                .flat_map(|s| stance_core::conll::extract_dep_triples(s))
                                .collect()
                        })
                        .collect(),
                )
            }
            _ => None,
        },
        mpqa: mpqa_path.map(parse_mpqa).transpose()?,
        arguing: match arguing_patterns_dir {
            Some(dir) => {
                let patterns = dir_files(dir)?;
                let macros = match arguing_macros_dir {
                    Some(d) => dir_files(d)?,
                    None => Vec::new(),
                };
                Some(parse_arguing(&patterns, &macros)?)
            }
            None => None,
        },
        corpus,
    };

    let vocab = match vocab_path {
        Some(path) => {
            // Reuse a training vocabulary: `path` may be the header itself or
            // the data file it sits next to.
            let header = if path.extension().is_some_and(|e| e == "header") {
                path.to_path_buf()
            } else {
                header_path(path)
            };
            let data_path = header.with_extension("");
            let (vocab, _) = if data_path.exists() {
                read_feature_file(&data_path)?
            } else {
                bail!(
                    "--vocab expects a feature file or its .header sidecar ({} not found)",
                    data_path.display()
                );
            };
            if vocab.scheme != scheme {
                bail!(
                    "vocabulary scheme {} does not match requested scheme {}",
                    vocab.scheme,
                    scheme
                );
            }
            vocab
        }
        None => match scheme {
            FeatureScheme::DepTriples => {
                let triples = inputs
                    .triples
                    .as_ref()
                    .context("DEP_TRIPLES requires --conll and --conll-index")?;
                build_vocab(CorpusItems::Triples(triples), scheme)?
            }
            _ => {
                let tagged = inputs
                    .tagged
                    .as_ref()
                    .context("BOW schemes require --tagged")?;
                build_vocab(CorpusItems::Tagged(tagged), scheme)?
            }
        },
    };

    let mut vectors = Vec::with_capacity(inputs.corpus.len());
    for (i, tweet) in inputs.corpus.tweets().iter().enumerate() {
        let aux = VectorizeAux {
            mpqa: inputs.mpqa.as_ref(),
            arguing: inputs.arguing.as_ref(),
            sentiment: Some(tweet.sentiment.unwrap_or(SentimentLabel::Other)),
            mpqa_presence_fallback,
        };
        let tokens: Vec<String>;
        let items = match scheme {
            FeatureScheme::DepTriples => {
                let triples = inputs
                    .triples
                    .as_ref()
                    .context("DEP_TRIPLES requires --conll and --conll-index")?;
                TweetItems::Triples(&triples[i])
            }
            _ => {
                let tagged = inputs
                    .tagged
                    .as_ref()
                    .context("BOW schemes require --tagged")?;
                tokens = tagged[i].iter().map(|t| t.token.clone()).collect();
                TweetItems::Tokens(&tokens)
            }
        };
        vectors.push(vectorize(items, &vocab, &aux, tweet.stance)?);
    }
    write_feature_file(&vectors, &vocab, out)?;
    println!(
        "{} vectors of length {} -> {}",
        vectors.len(),
        vocab.vector_len(),
        out.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    features: &Path,
    learner: LearnerArg,
    out: &Path,
    k: usize,
    weighting: WeightingArg,
    neighbor_semantics: SemanticsArg,
    n_trees: usize,
    max_features: MaxFeaturesArg,
    no_bootstrap: bool,
    min_samples_split: usize,
    seed: u64,
) -> Result<()> {
    let (_, vectors) = read_feature_file(features)?;
    match learner {
        LearnerArg::Knn => {
            let config = KnnConfig {
                k,
                weighting: weighting.into(),
                neighbor_semantics: neighbor_semantics.into(),
                tie_break: TieBreak::default(),
            };
            let base = fit(vectors)?;
            let weights = weights_for(&base, config.weighting);
            save_knn_model(&base, &config, &weights, out)?;
            println!("knn model ({} instances) -> {}", base.len(), out.display());
        }
        LearnerArg::Forest => {
            let config = ForestConfig {
                n_trees,
                max_features: match max_features {
                    MaxFeaturesArg::Sqrt => MaxFeatures::Sqrt,
                    MaxFeaturesArg::All => MaxFeatures::All,
                },
                bootstrap: !no_bootstrap,
                min_samples_split,
                seed,
            };
            let model = fit_forest(&vectors, &config)?;
            save_forest(&model, out)?;
            println!(
                "forest ({} trees, seed {seed}) -> {}",
                n_trees,
                out.display()
            );
        }
    }
    Ok(())
}

fn cmd_predict(model_path: &Path, features: &Path, out: &Path) -> Result<()> {
    let (_, vectors) = read_feature_file(features)?;
    let first_line = std::fs::read_to_string(model_path)
        .with_context(|| format!("reading {}", model_path.display()))?
        .lines()
        .next()
        .unwrap_or_default()
        .to_string();
    let predictions: Vec<StanceLabel> = if first_line.starts_with("stance-knn") {
        let (base, config, weights) = load_knn_model(model_path)?;
        vectors
            .iter()
            .map(|v| classify(&base, &config, &weights, &v.values))
            .collect::<std::result::Result<_, _>>()?
    } else if first_line.starts_with("stance-forest") {
        let model = load_forest(model_path)?;
        vectors
            .iter()
            .map(|v| predict_forest(&model, &v.values))
            .collect::<std::result::Result<_, _>>()?
    } else {
        bail!("unrecognized model file {}", model_path.display());
    };
    let mut text = String::new();
    for label in &predictions {
        text.push_str(label.as_str());
        text.push('\n');
    }
    std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    println!("{} predictions -> {}", predictions.len(), out.display());
    Ok(())
}

fn cmd_eval(predictions_path: &Path, gold_path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(predictions_path)
        .with_context(|| format!("reading {}", predictions_path.display()))?;
    let predictions: Vec<StanceLabel> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse())
        .collect::<std::result::Result<_, _>>()?;
    let (_, gold_vectors) = read_feature_file(gold_path)?;
    let gold: Vec<StanceLabel> = gold_vectors.iter().map(|v| v.label).collect();
    let acc = accuracy(&predictions, &gold)?;
    let correct = (acc * gold.len() as f64).round() as usize;
    println!("accuracy: {acc:.4} ({correct}/{})", gold.len());
    Ok(())
}

fn cmd_sweep_k(
    train: &Path,
    test: &Path,
    k_values: &str,
    weighting: WeightingArg,
    neighbor_semantics: SemanticsArg,
    out: &Path,
) -> Result<()> {
    let ks: Vec<usize> = k_values
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .context("--k-values must be comma-separated integers")?;
    if ks.is_empty() {
        bail!("--k-values must list at least one k");
    }
    let (train_vocab, train_vectors) = read_feature_file(train)?;
    let (test_vocab, test_vectors) = read_feature_file(test)?;
    if train_vocab != test_vocab {
        bail!("train and test feature files use different vocabularies");
    }
    let config = KnnConfig {
        k: 1,
        weighting: weighting.into(),
        neighbor_semantics: neighbor_semantics.into(),
        tie_break: TieBreak::default(),
    };
    let base = fit(train_vectors)?;
    let weights = weights_for(&base, config.weighting);
    let results = sweep_k(&base, &config, &weights, &test_vectors, &ks)?;
    emit_k_sweep(&results, out)?;
    for (k, acc) in &results {
        println!("k={k}\taccuracy={acc:.4}");
    }
    Ok(())
}

fn cmd_experiment(
    config_path: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
) -> Result<()> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(out) = out {
        config.output.dir = out;
    }
    if let Some(format) = format {
        config.output.format = match format {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Md => ReportFormat::Md,
        };
    }
    let table = run_experiment(&config)?;
    std::fs::create_dir_all(&config.output.dir)
        .with_context(|| format!("creating {}", config.output.dir.display()))?;
    let name = match config.output.format {
        ReportFormat::Csv => "results.csv",
        ReportFormat::Md => "results.md",
    };
    let path = config.output.dir.join(name);
    emit_report(&table, config.output.format, &path)?;
    println!("{} result rows -> {}", table.rows.len(), path.display());
    Ok(())
}

fn cmd_baseline(input: &Path, by_target: bool, spec: &ColumnSpec) -> Result<()> {
    let corpus = load_corpus(input, spec)?;
    let report = |name: &str, corpus: &Corpus| -> Result<()> {
        let (label, fraction) = majority_class(corpus)?;
        println!(
            "{name}\t{label}\t{:.2}%\t{}",
            fraction * 100.0,
            corpus.len()
        );
        Ok(())
    };
    if by_target {
        let parts: BTreeMap<String, Corpus> = split_by_target(&corpus);
        for (target, part) in &parts {
            report(target, part)?;
        }
    } else {
        report("ALL", &corpus)?;
    }
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Split {
            input,
            out_dir,
            columns,
        } => cmd_split(&input, &out_dir, &columns.spec()),
        Command::Tag {
            input,
            model,
            train_tagged,
            save_model,
            out,
            keep_hashtags,
            columns,
        } => cmd_tag(
            &input,
            model.as_deref(),
            train_tagged.as_deref(),
            save_model.as_deref(),
            &out,
            keep_hashtags,
            &columns.spec(),
        ),
        Command::Featurize {
            corpus,
            tagged,
            conll,
            conll_index,
            conll_columns,
            scheme,
            vocab,
            mpqa,
            arguing_patterns_dir,
            arguing_macros_dir,
            mpqa_presence_fallback,
            out,
            columns,
        } => cmd_featurize(
            &corpus,
            tagged.as_deref(),
            conll.as_deref(),
            conll_index.as_deref(),
            &conll_columns,
            &scheme,
            vocab.as_deref(),
            mpqa.as_deref(),
            arguing_patterns_dir.as_deref(),
            arguing_macros_dir.as_deref(),
            mpqa_presence_fallback,
            &out,
            &columns.spec(),
        ),
        Command::Train {
            features,
            learner,
            out,
            k,
            weighting,
            neighbor_semantics,
            n_trees,
            max_features,
            no_bootstrap,
            min_samples_split,
            seed,
        } => cmd_train(
            &features,
            learner,
            &out,
            k,
            weighting,
            neighbor_semantics,
            n_trees,
            max_features,
            no_bootstrap,
            min_samples_split,
            seed,
        ),
        Command::Predict {
            model,
            features,
            out,
        } => cmd_predict(&model, &features, &out),
        Command::Eval { predictions, gold } => cmd_eval(&predictions, &gold),
        Command::SweepK {
            train,
            test,
            k_values,
            weighting,
            neighbor_semantics,
            out,
        } => cmd_sweep_k(
            &train,
            &test,
            &k_values,
            weighting,
            neighbor_semantics,
            &out,
        ),
        Command::Experiment {
            config,
            seed,
            out,
            format,
        } => cmd_experiment(&config, seed, out, format),
        Command::Baseline {
            input,
            by_target,
            columns,
        } => cmd_baseline(&input, by_target, &columns.spec()),
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
