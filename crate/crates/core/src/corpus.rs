//! Tweet corpus loading, tokenization, per-target splitting, and the
//! majority-class baseline.
//!
//! A corpus is a delimited text file (TSV or CSV) with one header row and one
//! tweet per data row. Which columns hold the id, target, text, stance, and
//! (optionally) sentiment is configuration, not convention: real datasets
//! disagree on layout, so [`ColumnSpec`] carries the mapping.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Stance of a tweet toward its target. The set is closed: any other string
/// fails to parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StanceLabel {
    Favor,
    Against,
    None,
}

impl StanceLabel {
    /// All labels, in the fixed tie-break order used throughout the crate:
    /// AGAINST > FAVOR > NONE.
    pub const TIE_ORDER: [StanceLabel; 3] =
        [StanceLabel::Against, StanceLabel::Favor, StanceLabel::None];

    /// Rank under the crate-wide tie-break order (lower wins ties).
    pub fn tie_rank(self) -> usize {
        match self {
            StanceLabel::Against => 0,
            StanceLabel::Favor => 1,
            StanceLabel::None => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StanceLabel::Favor => "FAVOR",
            StanceLabel::Against => "AGAINST",
            StanceLabel::None => "NONE",
        }
    }
}

impl fmt::Display for StanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StanceLabel {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "FAVOR" => Ok(StanceLabel::Favor),
            "AGAINST" => Ok(StanceLabel::Against),
            "NONE" => Ok(StanceLabel::None),
            _ => Err(CorpusError::BadStance(s.to_string())),
        }
    }
}

/// Sentiment annotation of a tweet. `Other` is the fallback when the corpus
/// has no sentiment column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SentimentLabel {
    Positive,
    Negative,
    Other,
}

impl SentimentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Positive => "POSITIVE",
            SentimentLabel::Negative => "NEGATIVE",
            SentimentLabel::Other => "OTHER",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentLabel {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "POSITIVE" | "POS" => Ok(SentimentLabel::Positive),
            "NEGATIVE" | "NEG" => Ok(SentimentLabel::Negative),
            "OTHER" | "NEITHER" | "NEUTRAL" => Ok(SentimentLabel::Other),
            _ => Err(CorpusError::BadSentiment(s.to_string())),
        }
    }
}

/// One labeled example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub target: String,
    pub text: String,
    pub stance: StanceLabel,
    pub sentiment: Option<SentimentLabel>,
}

/// An ordered collection of tweets plus the distinct targets they mention.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    tweets: Vec<Tweet>,
    targets: Vec<String>,
}

/// Field delimiter of a corpus file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    Tab,
    Comma,
}

impl Delimiter {
    fn byte(self) -> u8 {
        match self {
            Delimiter::Tab => b'\t',
            Delimiter::Comma => b',',
        }
    }
}

/// Maps delimited columns to tweet fields. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub delimiter: Delimiter,
    pub id: usize,
    pub target: usize,
    pub text: usize,
    pub stance: usize,
    /// Sentiment column, if the corpus has one. Absent column means every
    /// tweet loads with no sentiment annotation.
    pub sentiment: Option<usize>,
}

impl ColumnSpec {
    /// The SemEval-style layout: `ID<TAB>Target<TAB>Tweet<TAB>Stance`.
    pub fn semeval_tsv() -> Self {
        ColumnSpec {
            delimiter: Delimiter::Tab,
            id: 0,
            target: 1,
            text: 2,
            stance: 3,
            sentiment: None,
        }
    }

    /// SemEval layout with a fifth sentiment column.
    pub fn semeval_tsv_with_sentiment() -> Self {
        ColumnSpec {
            sentiment: Some(4),
            ..ColumnSpec::semeval_tsv()
        }
    }

    fn required_width(&self) -> usize {
        let mut w = self.id.max(self.target).max(self.text).max(self.stance);
        if let Some(s) = self.sentiment {
            w = w.max(s);
        }
        w + 1
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: expected at least {expected} columns, found {found}")]
    WrongColumnCount {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("unparseable stance label {0:?}")]
    BadStance(String),
    #[error("unparseable sentiment label {0:?}")]
    BadSentiment(String),
    #[error("row {row}: {source}")]
    BadRow {
        row: usize,
        #[source]
        source: Box<CorpusError>,
    },
    #[error("row {row}: {field} must be nonempty")]
    EmptyField { row: usize, field: &'static str },
    #[error("corpus is empty")]
    Empty,
    #[error("malformed row {row}: {message}")]
    Malformed { row: usize, message: String },
}

impl Corpus {
    /// Builds a corpus from tweets, deriving the target set (distinct targets
    /// in first-appearance order).
    pub fn from_tweets(tweets: Vec<Tweet>) -> Self {
        let mut targets: Vec<String> = Vec::new();
        for tweet in &tweets {
            if !targets.iter().any(|t| t == &tweet.target) {
                targets.push(tweet.target.clone());
            }
        }
        Corpus { tweets, targets }
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    /// Distinct targets in first-appearance order.
    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }
}

/// Loads a corpus from a delimited file. The first row is a header and is
/// skipped; labels parse case-insensitively. Row numbers in errors are
/// 1-based file lines (the header is row 1).
pub fn load_corpus(path: impl AsRef<Path>, spec: &ColumnSpec) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter.byte())
        .has_headers(true)
        .flexible(true)
        // Tab-separated corpora are written without quoting; tweets may
        // contain stray double quotes that must not start a quoted field.
        .quoting(spec.delimiter == Delimiter::Comma)
        .from_reader(file);

    let mut tweets = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header row
        let record = record.map_err(|e| CorpusError::Malformed {
            row,
            message: e.to_string(),
        })?;
        let width = spec.required_width();
        if record.len() < width {
            return Err(CorpusError::WrongColumnCount {
                row,
                expected: width,
                found: record.len(),
            });
        }
        let field = |idx: usize| record.get(idx).unwrap_or("").to_string();
        let id = field(spec.id);
        let text = field(spec.text);
        if id.is_empty() {
            return Err(CorpusError::EmptyField { row, field: "id" });
        }
        if text.is_empty() {
            return Err(CorpusError::EmptyField { row, field: "text" });
        }
        let stance = field(spec.stance)
            .parse::<StanceLabel>()
            .map_err(|e| CorpusError::BadRow {
                row,
                source: Box::new(e),
            })?;
        let sentiment = match spec.sentiment {
            Some(idx) => Some(field(idx).parse::<SentimentLabel>().map_err(|e| {
                CorpusError::BadRow {
                    row,
                    source: Box::new(e),
                }
            })?),
            None => None,
        };
        tweets.push(Tweet {
            id,
            target: field(spec.target),
            text,
            stance,
            sentiment,
        });
    }
    Ok(Corpus::from_tweets(tweets))
}

/// Writes a corpus back in the input format: same columns, one header row.
/// Loading the written file with the same [`ColumnSpec`] yields an equal
/// corpus.
pub fn save_corpus(
    corpus: &Corpus,
    path: impl AsRef<Path>,
    spec: &ColumnSpec,
) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut writer = csv::WriterBuilder::new()
        .delimiter(spec.delimiter.byte())
        .quote_style(if spec.delimiter == Delimiter::Comma {
            csv::QuoteStyle::Necessary
        } else {
            csv::QuoteStyle::Never
        })
        .from_writer(file);

    let width = spec.required_width();
    let mut header = vec![String::new(); width];
    header[spec.id] = "ID".to_string();
    header[spec.target] = "Target".to_string();
    header[spec.text] = "Tweet".to_string();
    header[spec.stance] = "Stance".to_string();
    if let Some(s) = spec.sentiment {
        header[s] = "Sentiment".to_string();
    }
    let io_err = |e: csv::Error| CorpusError::Io {
        path: path.display().to_string(),
        source: std::io::Error::other(e),
    };
    writer.write_record(&header).map_err(io_err)?;
    for tweet in corpus.tweets() {
        let mut row = vec![String::new(); width];
        row[spec.id] = tweet.id.clone();
        row[spec.target] = tweet.target.clone();
        row[spec.text] = tweet.text.clone();
        row[spec.stance] = tweet.stance.to_string();
        if let Some(s) = spec.sentiment {
            row[s] = tweet.sentiment.unwrap_or(SentimentLabel::Other).to_string();
        }
        writer.write_record(&row).map_err(io_err)?;
    }
    writer.flush().map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}

/// Splits a corpus into one sub-corpus per target. Every tweet lands in
/// exactly the sub-corpus of its own target, in original order.
pub fn split_by_target(corpus: &Corpus) -> BTreeMap<String, Corpus> {
    let mut buckets: BTreeMap<String, Vec<Tweet>> = BTreeMap::new();
    for tweet in corpus.tweets() {
        buckets
            .entry(tweet.target.clone())
            .or_default()
            .push(tweet.clone());
    }
    buckets
        .into_iter()
        .map(|(target, tweets)| (target, Corpus::from_tweets(tweets)))
        .collect()
}

/// Tokenizer settings. The only knob is whether `#`/`@` prefixes are stripped
/// from hashtags and handles; everything else is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TokenizeOptions {
    pub strip_hashtags: bool,
}

impl Default for TokenizeOptions {
    fn default() -> Self {
        TokenizeOptions {
            strip_hashtags: true,
        }
    }
}

/// Tokenizes tweet text with the default rules: lowercase, split on
/// whitespace, strip leading/trailing punctuation from each token, remove
/// `#`/`@` prefixes (keeping the remainder), drop `http`-prefixed URL tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_with(text, TokenizeOptions::default())
}

/// [`tokenize`] with explicit options. With `strip_hashtags` off, a single
/// leading `#` or `@` survives on the token.
pub fn tokenize_with(text: &str, opts: TokenizeOptions) -> Vec<String> {
    let lowered = text.to_lowercase();
    let mut out = Vec::new();
    for raw in lowered.split_whitespace() {
        let (prefix, rest) = if !opts.strip_hashtags && (raw.starts_with('#') || raw.starts_with('@'))
        {
            raw.split_at(1)
        } else {
            ("", raw)
        };
        let core = rest.trim_matches(|c: char| !c.is_alphanumeric());
        if core.is_empty() || core.starts_with("http") {
            continue;
        }
        out.push(format!("{prefix}{core}"));
    }
    out
}

/// Most frequent stance in the corpus and its relative frequency. Ties break
/// AGAINST > FAVOR > NONE.
pub fn majority_class(corpus: &Corpus) -> Result<(StanceLabel, f64), CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::Empty);
    }
    let mut counts = [0usize; 3];
    for tweet in corpus.tweets() {
        counts[tweet.stance.tie_rank()] += 1;
    }
    let (rank, &count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("three label counts");
    let label = StanceLabel::TIE_ORDER[rank];
    Ok((label, count as f64 / corpus.len() as f64))
}
