//! Vocabularies and integer feature vectors for the six feature schemes.
//!
//! All schemes produce vectors over `{-1, 0, 1}`:
//!
//! * `BOW_3POS` — binary presence of words tagged as nouns, verbs, or
//!   adjectives in the training data.
//! * `BOW_ALL` — binary presence of every word.
//! * `BOW_3POS_SENTIMENT` — `BOW_3POS` plus a three-way sentiment one-hot.
//! * `MPQA_WEIGHTED` — all-words vocabulary; a present word contributes its
//!   subjectivity-lexicon polarity.
//! * `ARGUING_BINARY` — all-words vocabulary; 1 where a present word matches
//!   an arguing pattern.
//! * `DEP_TRIPLES` — binary presence of `dependent|head|label` triples.
//!
//! Vocabularies are built from training data only and sorted
//! lexicographically, so feature order is independent of corpus order.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conll::DepTriple;
use crate::corpus::{SentimentLabel, StanceLabel};
use crate::lexicons::arguing::{match_arguing, ArguingLexicon};
use crate::lexicons::mpqa::{lookup, MpqaLexicon};
use crate::tagger::TaggedToken;

/// The twelve content tags kept by the `BOW_3POS` filter.
pub const CONTENT_TAGS: [&str; 12] = [
    "JJ", "JJR", "JJS", "NN", "NNS", "NNP", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ",
];

/// Feature scheme identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureScheme {
    #[serde(rename = "BOW_3POS")]
    Bow3Pos,
    #[serde(rename = "BOW_ALL")]
    BowAll,
    #[serde(rename = "BOW_3POS_SENTIMENT")]
    Bow3PosSentiment,
    #[serde(rename = "MPQA_WEIGHTED")]
    MpqaWeighted,
    #[serde(rename = "ARGUING_BINARY")]
    ArguingBinary,
    #[serde(rename = "DEP_TRIPLES")]
    DepTriples,
}

impl FeatureScheme {
    pub const ALL: [FeatureScheme; 6] = [
        FeatureScheme::Bow3Pos,
        FeatureScheme::BowAll,
        FeatureScheme::Bow3PosSentiment,
        FeatureScheme::MpqaWeighted,
        FeatureScheme::ArguingBinary,
        FeatureScheme::DepTriples,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureScheme::Bow3Pos => "BOW_3POS",
            FeatureScheme::BowAll => "BOW_ALL",
            FeatureScheme::Bow3PosSentiment => "BOW_3POS_SENTIMENT",
            FeatureScheme::MpqaWeighted => "MPQA_WEIGHTED",
            FeatureScheme::ArguingBinary => "ARGUING_BINARY",
            FeatureScheme::DepTriples => "DEP_TRIPLES",
        }
    }
}

impl fmt::Display for FeatureScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureScheme {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, FeatureError> {
        FeatureScheme::ALL
            .into_iter()
            .find(|scheme| scheme.as_str() == s)
            .ok_or_else(|| FeatureError::UnknownScheme(s.to_string()))
    }
}

/// Ordered feature names for one scheme. Names are distinct and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub scheme: FeatureScheme,
    names: Vec<String>,
}

impl Vocabulary {
    /// Builds a vocabulary from names that are already sorted and distinct.
    pub fn new(scheme: FeatureScheme, names: Vec<String>) -> Result<Self, FeatureError> {
        if names.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FeatureError::UnsortedVocabulary);
        }
        Ok(Vocabulary { scheme, names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Length of vectors under this vocabulary (sentiment one-hot included
    /// where the scheme appends it).
    pub fn vector_len(&self) -> usize {
        self.names.len()
            + match self.scheme {
                FeatureScheme::Bow3PosSentiment => 3,
                _ => 0,
            }
    }
}

/// One tweet's integer feature values plus its stance label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureVector {
    pub values: Vec<i8>,
    pub label: StanceLabel,
}

/// Per-corpus input to vocabulary building: one entry per tweet.
#[derive(Debug, Clone, Copy)]
pub enum CorpusItems<'a> {
    Tagged(&'a [Vec<TaggedToken>]),
    Triples(&'a [Vec<DepTriple>]),
}

/// One tweet's items at vectorization time.
#[derive(Debug, Clone, Copy)]
pub enum TweetItems<'a> {
    Tokens(&'a [String]),
    Triples(&'a [DepTriple]),
}

/// Lexicons and per-tweet extras required by some schemes.
#[derive(Debug, Clone, Copy, Default)]
pub struct VectorizeAux<'a> {
    pub mpqa: Option<&'a MpqaLexicon>,
    pub arguing: Option<&'a ArguingLexicon>,
    pub sentiment: Option<SentimentLabel>,
    /// When set, a present word with no lexicon match contributes 1 instead
    /// of 0 under `MPQA_WEIGHTED` (ablation variant).
    pub mpqa_presence_fallback: bool,
}

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("unknown feature scheme {0:?}")]
    UnknownScheme(String),
    #[error("cannot build a vocabulary from an empty corpus")]
    EmptyInput,
    #[error("scheme {scheme} requires {expected} input")]
    InputKindMismatch {
        scheme: FeatureScheme,
        expected: &'static str,
    },
    #[error("vocabulary scheme {vocab} does not match requested scheme {requested}")]
    SchemeMismatch {
        vocab: FeatureScheme,
        requested: FeatureScheme,
    },
    #[error("scheme {0} requires the MPQA lexicon")]
    MissingMpqa(FeatureScheme),
    #[error("scheme {0} requires the arguing lexicon")]
    MissingArguing(FeatureScheme),
    #[error("scheme {0} requires a sentiment label")]
    MissingSentiment(FeatureScheme),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {message}")]
    BadFile {
        path: String,
        line: usize,
        message: String,
    },
    #[error("vector length {found} does not match vocabulary length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vocabulary names must be sorted and distinct")]
    UnsortedVocabulary,
}

/// Builds the vocabulary for a scheme from training tweets.
pub fn build_vocab(
    items: CorpusItems<'_>,
    scheme: FeatureScheme,
) -> Result<Vocabulary, FeatureError> {
    let mut names: BTreeSet<String> = BTreeSet::new();
    match (scheme, items) {
        (FeatureScheme::DepTriples, CorpusItems::Triples(tweets)) => {
            if tweets.is_empty() {
                return Err(FeatureError::EmptyInput);
            }
            for tweet in tweets {
                for triple in tweet.iter() {
                    names.insert(triple.feature_name());
                }
            }
        }
        (FeatureScheme::DepTriples, CorpusItems::Tagged(_)) => {
            return Err(FeatureError::InputKindMismatch {
                scheme,
                expected: "dependency-triple",
            });
        }
        (_, CorpusItems::Triples(_)) => {
            return Err(FeatureError::InputKindMismatch {
                scheme,
                expected: "tagged-token",
            });
        }
        (scheme, CorpusItems::Tagged(tweets)) => {
            if tweets.is_empty() {
                return Err(FeatureError::EmptyInput);
            }
            let filter_pos = matches!(
                scheme,
                FeatureScheme::Bow3Pos | FeatureScheme::Bow3PosSentiment
            );
            for tweet in tweets {
                for tt in tweet.iter() {
                    if !filter_pos || CONTENT_TAGS.contains(&tt.tag.as_str()) {
                        names.insert(tt.token.clone());
                    }
                }
            }
        }
    }
    Ok(Vocabulary {
        scheme,
        names: names.into_iter().collect(),
    })
}

fn sentiment_one_hot(sentiment: SentimentLabel) -> [i8; 3] {
    match sentiment {
        SentimentLabel::Positive => [1, 0, 0],
        SentimentLabel::Negative => [0, 1, 0],
        SentimentLabel::Other => [0, 0, 1],
    }
}

/// Builds one tweet's feature vector under a vocabulary.
pub fn vectorize(
    items: TweetItems<'_>,
    vocab: &Vocabulary,
    aux: &VectorizeAux<'_>,
    label: StanceLabel,
) -> Result<FeatureVector, FeatureError> {
    let scheme = vocab.scheme;
    let present: BTreeSet<String> = match (scheme, items) {
        (FeatureScheme::DepTriples, TweetItems::Triples(triples)) => {
            triples.iter().map(DepTriple::feature_name).collect()
        }
        (FeatureScheme::DepTriples, TweetItems::Tokens(_)) => {
            return Err(FeatureError::InputKindMismatch {
                scheme,
                expected: "dependency-triple",
            });
        }
        (_, TweetItems::Triples(_)) => {
            return Err(FeatureError::InputKindMismatch {
                scheme,
                expected: "token",
            });
        }
        (_, TweetItems::Tokens(tokens)) => tokens.iter().cloned().collect(),
    };

    let mut values = Vec::with_capacity(vocab.vector_len());
    match scheme {
        FeatureScheme::Bow3Pos
        | FeatureScheme::BowAll
        | FeatureScheme::DepTriples
        | FeatureScheme::Bow3PosSentiment => {
            for name in vocab.names() {
                values.push(i8::from(present.contains(name)));
            }
        }
        FeatureScheme::MpqaWeighted => {
            let mpqa = aux.mpqa.ok_or(FeatureError::MissingMpqa(scheme))?;
            for name in vocab.names() {
                let value = if present.contains(name) {
                    match lookup(mpqa, name) {
                        Some(weight) => weight,
                        None if aux.mpqa_presence_fallback => 1,
                        None => 0,
                    }
                } else {
                    0
                };
                values.push(value);
            }
        }
        FeatureScheme::ArguingBinary => {
            let arguing = aux.arguing.ok_or(FeatureError::MissingArguing(scheme))?;
            for name in vocab.names() {
                values.push(i8::from(
                    present.contains(name) && match_arguing(arguing, name),
                ));
            }
        }
    }
    if scheme == FeatureScheme::Bow3PosSentiment {
        let sentiment = aux
            .sentiment
            .ok_or(FeatureError::MissingSentiment(scheme))?;
        values.extend_from_slice(&sentiment_one_hot(sentiment));
    }
    Ok(FeatureVector { values, label })
}

/// Path of the header sidecar belonging to a feature data file.
pub fn header_path(data_path: &Path) -> PathBuf {
    let mut name = data_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push_str(".header");
    data_path.with_file_name(name)
}

/// Writes vectors as comma-separated lines with the class label last, plus a
/// `.header` sidecar holding the scheme and one feature name per line.
pub fn write_feature_file(
    vectors: &[FeatureVector],
    vocab: &Vocabulary,
    path: impl AsRef<Path>,
) -> Result<(), FeatureError> {
    let path = path.as_ref();
    let expected = vocab.vector_len();
    let mut data = String::new();
    for vector in vectors {
        if vector.values.len() != expected {
            return Err(FeatureError::LengthMismatch {
                expected,
                found: vector.values.len(),
            });
        }
        let mut fields: Vec<String> = vector.values.iter().map(|v| v.to_string()).collect();
        fields.push(vector.label.to_string());
        data.push_str(&fields.join(","));
        data.push('\n');
    }
    let io_err = |p: &Path, source| FeatureError::Io {
        path: p.display().to_string(),
        source,
    };
    std::fs::write(path, data).map_err(|e| io_err(path, e))?;

    let mut header = format!("#scheme={}\n", vocab.scheme);
    for name in vocab.names() {
        header.push_str(name);
        header.push('\n');
    }
    let hpath = header_path(path);
    std::fs::write(&hpath, header).map_err(|e| io_err(&hpath, e))?;
    Ok(())
}

/// Reads a feature file and its header sidecar back into a vocabulary and
/// vectors. Inverse of [`write_feature_file`].
pub fn read_feature_file(
    path: impl AsRef<Path>,
) -> Result<(Vocabulary, Vec<FeatureVector>), FeatureError> {
    let path = path.as_ref();
    let hpath = header_path(path);
    let io_err = |p: &Path, source| FeatureError::Io {
        path: p.display().to_string(),
        source,
    };
    let header_text = std::fs::read_to_string(&hpath).map_err(|e| io_err(&hpath, e))?;
    let mut lines = header_text.lines();
    let scheme_line = lines.next().ok_or_else(|| FeatureError::BadFile {
        path: hpath.display().to_string(),
        line: 1,
        message: "missing scheme line".into(),
    })?;
    let scheme: FeatureScheme = scheme_line
        .strip_prefix("#scheme=")
        .ok_or_else(|| FeatureError::BadFile {
            path: hpath.display().to_string(),
            line: 1,
            message: "first line must be `#scheme=<NAME>`".into(),
        })?
        .parse()?;
    let names: Vec<String> = lines.map(str::to_string).collect();
    let vocab = Vocabulary::new(scheme, names).map_err(|_| FeatureError::BadFile {
        path: hpath.display().to_string(),
        line: 2,
        message: "header names must be sorted and distinct".into(),
    })?;
    let expected = vocab.vector_len();

    let data = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut vectors = Vec::new();
    for (i, line) in data.lines().enumerate() {
        let bad = |message: String| FeatureError::BadFile {
            path: path.display().to_string(),
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected + 1 {
            return Err(bad(format!(
                "expected {} fields, found {}",
                expected + 1,
                fields.len()
            )));
        }
        let mut values = Vec::with_capacity(expected);
        for field in &fields[..expected] {
            let v: i8 = field
                .parse()
                .map_err(|_| bad(format!("bad feature value {field:?}")))?;
            if !(-1..=1).contains(&v) {
                return Err(bad(format!("feature value {v} outside -1..=1")));
            }
            values.push(v);
        }
        let label: StanceLabel = fields[expected]
            .parse()
            .map_err(|_| bad(format!("bad label {:?}", fields[expected])))?;
        vectors.push(FeatureVector { values, label });
    }
    Ok((vocab, vectors))
}
