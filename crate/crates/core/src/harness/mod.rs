//! Experiment orchestration: run a (target x scheme x learner) matrix over
//! prepared corpora and report per-target accuracies against the
//! majority-class baseline.
//!
//! A run is a pure function of the config file, the input files, and the
//! seed: per-(target, scheme) seeds are derived from the global seed, so
//! target-level parallelism cannot change any result.

pub mod config;
pub mod report;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::conll::{
    extract_dep_triples, group_sentences, load_alignment, load_conll, ConllColumns, ConllError,
    DepTriple,
};
use crate::corpus::{
    load_corpus, majority_class, Corpus, CorpusError, SentimentLabel, StanceLabel,
    TokenizeOptions, Tweet, tokenize_with,
};
use crate::features::{
    build_vocab, vectorize, CorpusItems, FeatureError, FeatureScheme, FeatureVector, TweetItems,
    VectorizeAux,
};
use crate::forest::{fit_forest, predict_forest, ForestError};
use crate::lexicons::arguing::{parse_arguing, ArguingError, ArguingLexicon};
use crate::lexicons::mpqa::{parse_mpqa, MpqaError, MpqaLexicon};
use crate::mbl::{classify, fit, weights_for, MblError};
use crate::tagger::{load_tagged, train_tagger, TagModel, TaggedToken, TaggerError};

pub use config::{
    ConllConfig, DataConfig, DonaldPolicy, ExperimentConfig, Learner, LexiconConfig, OutputConfig,
    ReportFormat, TaggerConfig,
};
pub use report::{emit_k_sweep, emit_report, render_report, ResultRow, ResultsTable};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Tagger(#[from] TaggerError),
    #[error(transparent)]
    Conll(#[from] ConllError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Mbl(#[from] MblError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Mpqa(#[from] MpqaError),
    #[error(transparent)]
    Arguing(#[from] ArguingError),
    #[error("{0}")]
    Validation(String),
    #[error("accuracy needs equal-length nonempty lists (got {predictions} vs {gold})")]
    AccuracyInput { predictions: usize, gold: usize },
    #[error("[target={target}, scheme={scheme}, learner={learner}] {source}")]
    Context {
        target: String,
        scheme: String,
        learner: String,
        #[source]
        source: Box<HarnessError>,
    },
}

/// Exact-match fraction between predictions and gold labels.
pub fn accuracy(predictions: &[StanceLabel], gold: &[StanceLabel]) -> Result<f64, HarnessError> {
    if predictions.is_empty() || predictions.len() != gold.len() {
        return Err(HarnessError::AccuracyInput {
            predictions: predictions.len(),
            gold: gold.len(),
        });
    }
    let correct = predictions
        .iter()
        .zip(gold)
        .filter(|(p, g)| p == g)
        .count();
    Ok(correct as f64 / gold.len() as f64)
}

/// Stable per-(target, scheme) seed derivation (FNV-1a over the global seed
/// and the names), so results cannot depend on scheduling order.
fn derive_seed(seed: u64, target: &str, scheme: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut step = |byte: u8| {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x100000001b3);
    };
    for b in seed.to_le_bytes() {
        step(b);
    }
    for b in target.bytes() {
        step(b);
    }
    step(0);
    for b in scheme.bytes() {
        step(b);
    }
    h
}

/// A corpus with its per-tweet tagged tokens and optional dependency
/// triples, all aligned by position.
struct PreparedCorpus {
    tweets: Vec<Tweet>,
    tagged: Vec<Vec<TaggedToken>>,
    triples: Option<Vec<Vec<DepTriple>>>,
}

impl PreparedCorpus {
    fn tokens(&self, index: usize) -> Vec<String> {
        self.tagged[index].iter().map(|t| t.token.clone()).collect()
    }
}

enum TagSource<'a> {
    Model(&'a TagModel),
    Sentences(Vec<Vec<TaggedToken>>),
}

fn prepare(
    corpus: &Corpus,
    opts: TokenizeOptions,
    tag_source: TagSource<'_>,
    conll: Option<(&Path, &Path, &ConllColumns)>,
) -> Result<PreparedCorpus, HarnessError> {
    let tagged = match tag_source {
        TagSource::Model(model) => {
            let mut tagged = Vec::with_capacity(corpus.len());
            for tweet in corpus.tweets() {
                let tokens = tokenize_with(&tweet.text, opts);
                if tokens.is_empty() {
                    tagged.push(Vec::new());
                } else {
                    tagged.push(model.tag(&tokens)?);
                }
            }
            tagged
        }
        TagSource::Sentences(sentences) => {
            if sentences.len() != corpus.len() {
                return Err(HarnessError::Validation(format!(
                    "pre-tagged file has {} sentences but the corpus has {} tweets",
                    sentences.len(),
                    corpus.len()
                )));
            }
            sentences
        }
    };
    let triples = match conll {
        Some((conll_path, index_path, columns)) => {
            let sentences = load_conll(conll_path, columns)?;
            let counts = load_alignment(index_path)?;
            if counts.len() != corpus.len() {
                return Err(HarnessError::Validation(format!(
                    "alignment sidecar {} lists {} tweets but the corpus has {}",
                    index_path.display(),
                    counts.len(),
                    corpus.len()
                )));
            }
            let groups = group_sentences(sentences, &counts)?;
            Some(
                groups
                    .into_iter()
                    .map(|group| {
                        group
                            .iter()
                            .flat_map(|s| extract_dep_triples(s))
                            .collect::<Vec<DepTriple>>()
                    })
                    .collect(),
            )
        }
        None => None,
    };
    Ok(PreparedCorpus {
        tweets: corpus.tweets().to_vec(),
        tagged,
        triples,
    })
}

/// Regular files in a directory, sorted by name.
fn dir_files(dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let entries = std::fs::read_dir(dir).map_err(|source| HarnessError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| HarnessError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let path = entry.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

struct Resources {
    mpqa: Option<MpqaLexicon>,
    arguing: Option<ArguingLexicon>,
}

fn vectorize_subset(
    prepared: &PreparedCorpus,
    indices: &[usize],
    vocab: &crate::features::Vocabulary,
    resources: &Resources,
    mpqa_presence_fallback: bool,
) -> Result<Vec<FeatureVector>, HarnessError> {
    let mut vectors = Vec::with_capacity(indices.len());
    for &i in indices {
        let tweet = &prepared.tweets[i];
        let aux = VectorizeAux {
            mpqa: resources.mpqa.as_ref(),
            arguing: resources.arguing.as_ref(),
            sentiment: Some(tweet.sentiment.unwrap_or(SentimentLabel::Other)),
            mpqa_presence_fallback,
        };
        let tokens;
        let items = match vocab.scheme {
            FeatureScheme::DepTriples => {
                let triples = prepared
                    .triples
                    .as_ref()
                    .expect("validated: conll data loaded for DEP_TRIPLES");
                TweetItems::Triples(&triples[i])
            }
            _ => {
                tokens = prepared.tokens(i);
                TweetItems::Tokens(&tokens)
            }
        };
        vectors.push(vectorize(items, vocab, &aux, tweet.stance)?);
    }
    Ok(vectors)
}

fn build_vocab_for(
    prepared: &PreparedCorpus,
    indices: &[usize],
    scheme: FeatureScheme,
) -> Result<crate::features::Vocabulary, HarnessError> {
    match scheme {
        FeatureScheme::DepTriples => {
            let triples = prepared
                .triples
                .as_ref()
                .expect("validated: conll data loaded for DEP_TRIPLES");
            let subset: Vec<Vec<DepTriple>> =
                indices.iter().map(|&i| triples[i].clone()).collect();
            Ok(build_vocab(CorpusItems::Triples(&subset), scheme)?)
        }
        _ => {
            let subset: Vec<Vec<TaggedToken>> =
                indices.iter().map(|&i| prepared.tagged[i].clone()).collect();
            Ok(build_vocab(CorpusItems::Tagged(&subset), scheme)?)
        }
    }
}

fn with_context<'a>(
    target: &'a str,
    scheme: &'a str,
    learner: &'a str,
) -> impl Fn(HarnessError) -> HarnessError + 'a {
    move |source| HarnessError::Context {
        target: target.to_string(),
        scheme: scheme.to_string(),
        learner: learner.to_string(),
        source: Box::new(source),
    }
}

fn run_target(
    config: &ExperimentConfig,
    target: &str,
    train: &PreparedCorpus,
    extra: Option<&PreparedCorpus>,
    test: &PreparedCorpus,
    resources: &Resources,
) -> Result<Vec<ResultRow>, HarnessError> {
    let test_idx: Vec<usize> = test
        .tweets
        .iter()
        .enumerate()
        .filter(|(_, t)| t.target == target)
        .map(|(i, _)| i)
        .collect();
    let main_idx: Vec<usize> = train
        .tweets
        .iter()
        .enumerate()
        .filter(|(_, t)| t.target == target)
        .map(|(i, _)| i)
        .collect();
    let (train_prepared, train_idx): (&PreparedCorpus, Vec<usize>) = if !main_idx.is_empty() {
        (train, main_idx)
    } else {
        match config.donald_training_policy {
            DonaldPolicy::None => return Ok(Vec::new()),
            DonaldPolicy::UnionOfAll => (train, (0..train.tweets.len()).collect()),
            DonaldPolicy::ExplicitFile => {
                let extra = extra.expect("validated: donald_train_file loaded");
                (extra, (0..extra.tweets.len()).collect())
            }
        }
    };

    let test_subset: Vec<Tweet> = test_idx.iter().map(|&i| test.tweets[i].clone()).collect();
    let gold: Vec<StanceLabel> = test_subset.iter().map(|t| t.stance).collect();
    let (_, majority_baseline) = majority_class(&Corpus::from_tweets(test_subset))?;

    let mut rows = Vec::new();
    for &scheme in &config.schemes {
        let ctx = with_context(target, scheme.as_str(), "-");
        let vocab = build_vocab_for(train_prepared, &train_idx, scheme).map_err(&ctx)?;
        let fallback = config.lexicons.mpqa_presence_fallback;
        let train_vectors =
            vectorize_subset(train_prepared, &train_idx, &vocab, resources, fallback)
                .map_err(&ctx)?;
        let test_vectors =
            vectorize_subset(test, &test_idx, &vocab, resources, fallback).map_err(&ctx)?;

        for &learner in &config.learners {
            let ctx = with_context(target, scheme.as_str(), learner.as_str());
            let predictions: Vec<StanceLabel> = match learner {
                Learner::Knn => {
                    let knn_config = config.knn.config_for(target);
                    let base = fit(train_vectors.clone()).map_err(|e| ctx(e.into()))?;
                    let weights = weights_for(&base, knn_config.weighting);
                    test_vectors
                        .iter()
                        .map(|v| classify(&base, &knn_config, &weights, &v.values))
                        .collect::<Result<_, _>>()
                        .map_err(|e| ctx(e.into()))?
                }
                Learner::Forest => {
                    let seed = derive_seed(config.seed, target, scheme.as_str());
                    let forest_config = config.forest.config_with_seed(seed);
                    let model =
                        fit_forest(&train_vectors, &forest_config).map_err(|e| ctx(e.into()))?;
                    test_vectors
                        .iter()
                        .map(|v| predict_forest(&model, &v.values))
                        .collect::<Result<_, _>>()
                        .map_err(|e| ctx(e.into()))?
                }
            };
            let acc = accuracy(&predictions, &gold).map_err(&ctx)?;
            rows.push(ResultRow {
                target: target.to_string(),
                scheme,
                learner,
                accuracy: acc,
                majority_baseline,
                n_test: test_idx.len(),
            });
        }
    }
    Ok(rows)
}

/// Runs the full experiment matrix described by the config. Row order is
/// deterministic: targets sorted, then schemes and learners in config order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultsTable, HarnessError> {
    let spec = config.data.column_spec();
    let train_corpus = load_corpus(&config.data.train, &spec)?;
    let test_corpus = load_corpus(&config.data.test, &spec)?;
    let opts = TokenizeOptions {
        strip_hashtags: config.data.strip_hashtags,
    };

    let model = match &config.tagger.train_tagged {
        Some(path) => Some(train_tagger(&load_tagged(path)?)?),
        None => None,
    };

    let conll_columns = config
        .conll
        .as_ref()
        .map(|c| ConllColumns::preset(&c.columns).expect("validated preset"));
    let want_triples = config.schemes.contains(&FeatureScheme::DepTriples);
    let conll_for = |which: fn(&ConllConfig) -> (&PathBuf, &PathBuf)| {
        config.conll.as_ref().filter(|_| want_triples).map(|c| {
            let (data, index) = which(c);
            (data, index)
        })
    };

    let train_conll = conll_for(|c| (&c.train, &c.train_index));
    let test_conll = conll_for(|c| (&c.test, &c.test_index));

    let train_prepared = prepare(
        &train_corpus,
        opts,
        match &model {
            Some(m) => TagSource::Model(m),
            None => TagSource::Sentences(load_tagged(
                config.tagger.pretagged_train.as_ref().expect("validated"),
            )?),
        },
        train_conll.map(|(d, i)| (d.as_path(), i.as_path(), conll_columns.as_ref().unwrap())),
    )?;
    let test_prepared = prepare(
        &test_corpus,
        opts,
        match &model {
            Some(m) => TagSource::Model(m),
            None => TagSource::Sentences(load_tagged(
                config.tagger.pretagged_test.as_ref().expect("validated"),
            )?),
        },
        test_conll.map(|(d, i)| (d.as_path(), i.as_path(), conll_columns.as_ref().unwrap())),
    )?;

    let extra_prepared = match (config.donald_training_policy, &config.donald_train_file) {
        (DonaldPolicy::ExplicitFile, Some(path)) => {
            let corpus = load_corpus(path, &spec)?;
            Some(prepare(
                &corpus,
                opts,
                TagSource::Model(model.as_ref().expect("validated: trained tagger")),
                None,
            )?)
        }
        _ => None,
    };

    let resources = Resources {
        mpqa: config
            .lexicons
            .mpqa
            .as_ref()
            .map(parse_mpqa)
            .transpose()?,
        arguing: match &config.lexicons.arguing_patterns_dir {
            Some(patterns_dir) => {
                let patterns = dir_files(patterns_dir)?;
                let macros = match &config.lexicons.arguing_macros_dir {
                    Some(dir) => dir_files(dir)?,
                    None => Vec::new(),
                };
                Some(parse_arguing(&patterns, &macros)?)
            }
            None => None,
        },
    };

    if config.schemes.contains(&FeatureScheme::Bow3PosSentiment) {
        let missing = test_prepared
            .tweets
            .iter()
            .filter(|t| t.sentiment.is_none())
            .count();
        if missing > 0 {
            eprintln!("note: {missing} test tweets have no sentiment label; treated as OTHER");
        }
    }

    let targets: BTreeSet<String> = test_corpus
        .targets()
        .iter()
        .cloned()
        .collect();
    let targets: Vec<String> = targets.into_iter().collect();

    let run_one = |target: &String| {
        run_target(
            config,
            target,
            &train_prepared,
            extra_prepared.as_ref(),
            &test_prepared,
            &resources,
        )
    };

    let per_target: Vec<Vec<ResultRow>> = if config.parallel_targets {
        targets
            .par_iter()
            .map(run_one)
            .collect::<Result<_, _>>()?
    } else {
        targets.iter().map(run_one).collect::<Result<_, _>>()?
    };

    Ok(ResultsTable {
        rows: per_target.into_iter().flatten().collect(),
    })
}
