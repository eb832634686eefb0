//! Trigram-HMM part-of-speech tagger.
//!
//! Training counts tag unigrams/bigrams/trigrams over sentences padded with
//! two synthetic start tags and one end tag, estimates interpolation weights
//! by deleted interpolation, and builds suffix statistics from rare words
//! for unknown-word handling. Tagging runs Viterbi over tag-pair states with
//! beam pruning; [`TagModel::tag_exact`] disables the beam.
//!
//! The model is tagset-agnostic: whatever tags appear in the training data
//! define the tagset.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

/// Internal id of the synthetic sentence-start tag.
const BOS: u16 = 0;
/// Internal id of the synthetic sentence-end tag.
const EOS: u16 = 1;
/// Real tags are interned starting at this id.
const FIRST_TAG: u16 = 2;

/// Default beam factor: states scoring worse than the column best by more
/// than this probability ratio are pruned.
pub const DEFAULT_BEAM_FACTOR: f64 = 1000.0;

/// Longest suffix recorded for unknown-word statistics.
const SUFFIX_MAX_LEN: usize = 10;
/// Words with training frequency at or below this feed the suffix table.
const RARE_THRESHOLD: u64 = 2;

/// A token with its part-of-speech tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub token: String,
    pub tag: String,
}

impl TaggedToken {
    pub fn new(token: impl Into<String>, tag: impl Into<String>) -> Self {
        TaggedToken {
            token: token.into(),
            tag: tag.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum TaggerError {
    #[error("training corpus has no nonempty sentences")]
    EmptyCorpus,
    #[error("cannot tag an empty token list")]
    EmptyInput,
    #[error("line {line}: expected `token<TAB>tag`, found {found} fields")]
    BadLine { line: usize, found: usize },
    #[error("line {line}: token and tag must be nonempty")]
    EmptyField { line: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model file line {line}: {message}")]
    BadModel { line: usize, message: String },
}

/// Trained tagger state: n-gram count tables, interpolation weights, and
/// per-suffix tag statistics for unknown words.
#[derive(Debug, Clone, PartialEq)]
pub struct TagModel {
    tags: Vec<String>,
    unigrams: BTreeMap<u16, u64>,
    unigram_total: u64,
    bigrams: BTreeMap<(u16, u16), u64>,
    bigram_contexts: BTreeMap<u16, u64>,
    trigrams: BTreeMap<(u16, u16, u16), u64>,
    trigram_contexts: BTreeMap<(u16, u16), u64>,
    emissions: BTreeMap<String, BTreeMap<u16, u64>>,
    lambdas: [f64; 3],
    theta: f64,
    suffix_counts: BTreeMap<String, BTreeMap<u16, u64>>,
}

impl TagModel {
    /// The real tagset, in first-appearance order. Boundary tags are
    /// internal and never reported.
    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    /// Interpolation weights (unigram, bigram, trigram); they sum to 1.
    pub fn lambdas(&self) -> [f64; 3] {
        self.lambdas
    }

    pub fn tag_index(&self, tag: &str) -> Option<usize> {
        self.tags.iter().position(|t| t == tag)
    }

    /// Raw emission count for (word, tag).
    pub fn emission_count(&self, word: &str, tag: &str) -> u64 {
        let Some(idx) = self.tag_index(tag) else {
            return 0;
        };
        self.emissions
            .get(word)
            .and_then(|m| m.get(&(idx as u16 + FIRST_TAG)))
            .copied()
            .unwrap_or(0)
    }

    fn id(&self, tag_index: usize) -> u16 {
        tag_index as u16 + FIRST_TAG
    }

    fn count(map: &BTreeMap<(u16, u16, u16), u64>, key: (u16, u16, u16)) -> u64 {
        map.get(&key).copied().unwrap_or(0)
    }

    /// Smoothed transition probability P(next | t1, t2). `next` may be any
    /// real tag or the end tag; unseen histories back off to the shorter
    /// context so the distribution stays proper for every history.
    fn transition(&self, t1: u16, t2: u16, next: u16) -> f64 {
        let p_uni = self.unigrams.get(&next).copied().unwrap_or(0) as f64
            / self.unigram_total as f64;
        let p_bi = match self.bigram_contexts.get(&t2) {
            Some(&ctx) if ctx > 0 => {
                self.bigrams.get(&(t2, next)).copied().unwrap_or(0) as f64 / ctx as f64
            }
            _ => p_uni,
        };
        let p_tri = match self.trigram_contexts.get(&(t1, t2)) {
            Some(&ctx) if ctx > 0 => {
                Self::count(&self.trigrams, (t1, t2, next)) as f64 / ctx as f64
            }
            _ => p_bi,
        };
        self.lambdas[0] * p_uni + self.lambdas[1] * p_bi + self.lambdas[2] * p_tri
    }

    fn transition_ln(&self, t1: u16, t2: u16, next: u16) -> f64 {
        self.transition(t1, t2, next).ln()
    }

    /// Total training occurrences of real-tag tokens.
    fn real_token_total(&self) -> u64 {
        self.unigram_total - self.unigrams.get(&EOS).copied().unwrap_or(0)
    }

    /// P(tag) over real tokens, used to invert suffix probabilities.
    fn tag_prior(&self, id: u16) -> f64 {
        self.unigrams.get(&id).copied().unwrap_or(0) as f64 / self.real_token_total() as f64
    }

    /// Smoothed P(tag | longest known suffix of `word`) by successive
    /// abstraction from the empty suffix outward.
    fn suffix_distribution(&self, word: &str) -> BTreeMap<u16, f64> {
        let root = match self.suffix_counts.get("") {
            Some(counts) => counts,
            None => return BTreeMap::new(),
        };
        let normalize = |counts: &BTreeMap<u16, u64>| -> BTreeMap<u16, f64> {
            let total: u64 = counts.values().sum();
            counts
                .iter()
                .map(|(&t, &c)| (t, c as f64 / total as f64))
                .collect()
        };
        let mut dist = normalize(root);
        let chars: Vec<char> = word.chars().collect();
        for len in 1..=SUFFIX_MAX_LEN.min(chars.len()) {
            let suffix: String = chars[chars.len() - len..].iter().collect();
            let Some(counts) = self.suffix_counts.get(&suffix) else {
                break;
            };
            let ml = normalize(counts);
            let mut next = BTreeMap::new();
            for (&t, &prev_p) in &dist {
                let p = (ml.get(&t).copied().unwrap_or(0.0) + self.theta * prev_p)
                    / (1.0 + self.theta);
                next.insert(t, p);
            }
            for (&t, &p) in &ml {
                next.entry(t).or_insert(p / (1.0 + self.theta));
            }
            dist = next;
        }
        dist
    }

    /// Log emission score of a word under a tag. Known words use maximum
    /// likelihood P(word | tag); unknown words invert the suffix estimate,
    /// scoring proportionally to P(tag | suffix) / P(tag).
    pub fn emission_ln(&self, word: &str, tag_index: usize) -> f64 {
        let id = self.id(tag_index);
        match self.emissions.get(word) {
            Some(counts) => {
                let c = counts.get(&id).copied().unwrap_or(0);
                if c == 0 {
                    return f64::NEG_INFINITY;
                }
                let tag_total = self.unigrams.get(&id).copied().unwrap_or(0);
                (c as f64 / tag_total as f64).ln()
            }
            None => {
                let dist = self.suffix_distribution(word);
                let p = dist.get(&id).copied().unwrap_or(0.0);
                if p <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                (p / self.tag_prior(id)).ln()
            }
        }
    }

    /// Candidate tag indices for a word: observed tags for known words, the
    /// suffix-distribution support for unknown ones.
    fn candidates(&self, word: &str) -> Vec<usize> {
        match self.emissions.get(word) {
            Some(counts) => counts.keys().map(|&id| (id - FIRST_TAG) as usize).collect(),
            None => self
                .suffix_distribution(word)
                .iter()
                .filter(|(_, &p)| p > 0.0)
                .map(|(&id, _)| (id - FIRST_TAG) as usize)
                .collect(),
        }
    }

    /// Log probability of a full tag sequence for `tokens`, including the
    /// boundary transitions. The same accumulation the search uses, exposed
    /// so alternative searches can score candidate paths identically.
    pub fn score_sequence(&self, tokens: &[String], tag_indices: &[usize]) -> f64 {
        assert_eq!(tokens.len(), tag_indices.len());
        let mut t1 = BOS;
        let mut t2 = BOS;
        let mut score = 0.0;
        for (token, &idx) in tokens.iter().zip(tag_indices) {
            let id = self.id(idx);
            score += self.transition_ln(t1, t2, id);
            score += self.emission_ln(token, idx);
            t1 = t2;
            t2 = id;
        }
        score += self.transition_ln(t1, t2, EOS);
        score
    }

    /// Viterbi-optimal tag sequence with the default beam factor.
    pub fn tag(&self, tokens: &[String]) -> Result<Vec<TaggedToken>, TaggerError> {
        self.tag_with_beam(tokens, Some(DEFAULT_BEAM_FACTOR))
    }

    /// Exhaustive-search Viterbi (no beam pruning).
    pub fn tag_exact(&self, tokens: &[String]) -> Result<Vec<TaggedToken>, TaggerError> {
        self.tag_with_beam(tokens, None)
    }

    /// Viterbi with an explicit beam factor (`None` disables pruning).
    pub fn tag_with_beam(
        &self,
        tokens: &[String],
        beam_factor: Option<f64>,
    ) -> Result<Vec<TaggedToken>, TaggerError> {
        if tokens.is_empty() {
            return Err(TaggerError::EmptyInput);
        }
        let indices = self.viterbi(tokens, beam_factor);
        Ok(tokens
            .iter()
            .zip(indices)
            .map(|(token, idx)| TaggedToken::new(token.clone(), self.tags[idx].clone()))
            .collect())
    }

    fn viterbi(&self, tokens: &[String], beam_factor: Option<f64>) -> Vec<usize> {
        // Column entry: state (t1, t2) -> (score, index of predecessor entry
        // in the previous column). Ties keep the first (smallest-state) path.
        type Column = Vec<((u16, u16), f64, usize)>;
        let mut columns: Vec<Column> = Vec::with_capacity(tokens.len());
        let mut prev: Column = vec![((BOS, BOS), 0.0, 0)];
        for token in tokens {
            let candidates = self.candidates(token);
            let emit: Vec<(u16, f64)> = candidates
                .iter()
                .map(|&idx| (self.id(idx), self.emission_ln(token, idx)))
                .collect();
            let mut column: BTreeMap<(u16, u16), (f64, usize)> = BTreeMap::new();
            for (p, &((t1, t2), p_score, _)) in prev.iter().enumerate() {
                if p_score == f64::NEG_INFINITY {
                    continue;
                }
                for &(id, e) in &emit {
                    let mut score = p_score + self.transition_ln(t1, t2, id);
                    score += e;
                    let entry = column.entry((t2, id)).or_insert((f64::NEG_INFINITY, p));
                    if score > entry.0 {
                        *entry = (score, p);
                    }
                }
            }
            let mut entries: Vec<((u16, u16), f64, usize)> = column
                .into_iter()
                .map(|(state, (score, back))| (state, score, back))
                .collect();
            if let Some(factor) = beam_factor {
                let best = entries
                    .iter()
                    .map(|e| e.1)
                    .fold(f64::NEG_INFINITY, f64::max);
                if best > f64::NEG_INFINITY {
                    let cutoff = best - factor.ln();
                    entries.retain(|e| e.1 >= cutoff);
                }
            }
            if entries.iter().all(|e| e.1 == f64::NEG_INFINITY) {
                // Degenerate model: no path has positive probability. Fall
                // back to per-token emission argmax.
                return self.emission_argmax(tokens);
            }
            columns.push(entries);
            prev = columns.last().unwrap().clone();
        }

        // Close with the end-tag transition and pick the best final state.
        let last = columns.last().unwrap();
        let mut best: Option<(f64, usize)> = None;
        for (i, &((t1, t2), score, _)) in last.iter().enumerate() {
            if score == f64::NEG_INFINITY {
                continue;
            }
            let total = score + self.transition_ln(t1, t2, EOS);
            if best.is_none_or(|(b, _)| total > b) {
                best = Some((total, i));
            }
        }
        let Some((_, mut at)) = best else {
            return self.emission_argmax(tokens);
        };

        let mut indices = vec![0usize; tokens.len()];
        for pos in (0..tokens.len()).rev() {
            let (state, _, back) = columns[pos][at];
            indices[pos] = (state.1 - FIRST_TAG) as usize;
            at = back;
        }
        indices
    }

    fn emission_argmax(&self, tokens: &[String]) -> Vec<usize> {
        tokens
            .iter()
            .map(|token| {
                let candidates = self.candidates(token);
                candidates
                    .iter()
                    .copied()
                    .max_by(|&a, &b| {
                        self.emission_ln(token, a)
                            .partial_cmp(&self.emission_ln(token, b))
                            .unwrap_or(std::cmp::Ordering::Equal)
                            .then(b.cmp(&a))
                    })
                    .unwrap_or(0)
            })
            .collect()
    }
}

/// Trains a model on tagged sentences.
pub fn train_tagger(sentences: &[Vec<TaggedToken>]) -> Result<TagModel, TaggerError> {
    let sentences: Vec<&Vec<TaggedToken>> =
        sentences.iter().filter(|s| !s.is_empty()).collect();
    if sentences.is_empty() {
        return Err(TaggerError::EmptyCorpus);
    }

    let mut tags: Vec<String> = Vec::new();
    let intern = |tag: &str, tags: &mut Vec<String>| -> u16 {
        match tags.iter().position(|t| t == tag) {
            Some(i) => i as u16 + FIRST_TAG,
            None => {
                tags.push(tag.to_string());
                (tags.len() - 1) as u16 + FIRST_TAG
            }
        }
    };

    let mut unigrams: BTreeMap<u16, u64> = BTreeMap::new();
    let mut bigrams: BTreeMap<(u16, u16), u64> = BTreeMap::new();
    let mut bigram_contexts: BTreeMap<u16, u64> = BTreeMap::new();
    let mut trigrams: BTreeMap<(u16, u16, u16), u64> = BTreeMap::new();
    let mut trigram_contexts: BTreeMap<(u16, u16), u64> = BTreeMap::new();
    let mut emissions: BTreeMap<String, BTreeMap<u16, u64>> = BTreeMap::new();

    for sentence in &sentences {
        let mut padded = vec![BOS, BOS];
        for tt in sentence.iter() {
            let id = intern(&tt.tag, &mut tags);
            padded.push(id);
            *unigrams.entry(id).or_default() += 1;
            *emissions
                .entry(tt.token.clone())
                .or_default()
                .entry(id)
                .or_default() += 1;
        }
        padded.push(EOS);
        *unigrams.entry(EOS).or_default() += 1;
        // One n-gram event per predicted position (tokens and the end tag),
        // so every context marginal matches the events it conditions.
        for i in 2..padded.len() {
            *bigrams.entry((padded[i - 1], padded[i])).or_default() += 1;
            *bigram_contexts.entry(padded[i - 1]).or_default() += 1;
            *trigrams
                .entry((padded[i - 2], padded[i - 1], padded[i]))
                .or_default() += 1;
            *trigram_contexts
                .entry((padded[i - 2], padded[i - 1]))
                .or_default() += 1;
        }
    }
    let unigram_total: u64 = unigrams.values().sum();

    // Deleted interpolation: each trigram credits the order whose deleted
    // relative frequency is largest; exact ties go to the higher order.
    let mut credit = [0u64; 3];
    for (&(t1, t2, t3), &c) in &trigrams {
        let d3 = {
            let ctx = trigram_contexts[&(t1, t2)];
            if ctx > 1 {
                (c - 1) as f64 / (ctx - 1) as f64
            } else {
                0.0
            }
        };
        let d2 = {
            let ctx = bigram_contexts[&t2];
            if ctx > 1 {
                (bigrams[&(t2, t3)] - 1) as f64 / (ctx - 1) as f64
            } else {
                0.0
            }
        };
        let d1 = if unigram_total > 1 {
            (unigrams[&t3] - 1) as f64 / (unigram_total - 1) as f64
        } else {
            0.0
        };
        if d3 >= d2 && d3 >= d1 {
            credit[2] += c;
        } else if d2 >= d1 {
            credit[1] += c;
        } else {
            credit[0] += c;
        }
    }
    let total_credit: u64 = credit.iter().sum();
    let lambdas = if total_credit == 0 {
        [1.0 / 3.0; 3]
    } else {
        [
            credit[0] as f64 / total_credit as f64,
            credit[1] as f64 / total_credit as f64,
            credit[2] as f64 / total_credit as f64,
        ]
    };

    // Theta: standard deviation of the unconditioned tag probabilities.
    let real_total: u64 = unigrams
        .iter()
        .filter(|(&id, _)| id >= FIRST_TAG)
        .map(|(_, &c)| c)
        .sum();
    let s = tags.len();
    let theta = if s >= 2 {
        let mean = 1.0 / s as f64;
        let var: f64 = unigrams
            .iter()
            .filter(|(&id, _)| id >= FIRST_TAG)
            .map(|(_, &c)| {
                let p = c as f64 / real_total as f64;
                (p - mean) * (p - mean)
            })
            .sum::<f64>()
            / (s as f64 - 1.0);
        var.sqrt()
    } else {
        0.0
    };

    // Suffix statistics from rare words; if every word is frequent, fall
    // back to the overall tag distribution at the empty suffix.
    let mut suffix_counts: BTreeMap<String, BTreeMap<u16, u64>> = BTreeMap::new();
    for (word, counts) in &emissions {
        let word_total: u64 = counts.values().sum();
        if word_total > RARE_THRESHOLD {
            continue;
        }
        let chars: Vec<char> = word.chars().collect();
        for len in 0..=SUFFIX_MAX_LEN.min(chars.len()) {
            let suffix: String = chars[chars.len() - len..].iter().collect();
            let entry = suffix_counts.entry(suffix).or_default();
            for (&id, &c) in counts {
                *entry.entry(id).or_default() += c;
            }
        }
    }
    if suffix_counts.is_empty() {
        suffix_counts.insert(
            String::new(),
            unigrams
                .iter()
                .filter(|(&id, _)| id >= FIRST_TAG)
                .map(|(&id, &c)| (id, c))
                .collect(),
        );
    }

    Ok(TagModel {
        tags,
        unigrams,
        unigram_total,
        bigrams,
        bigram_contexts,
        trigrams,
        trigram_contexts,
        emissions,
        lambdas,
        theta,
        suffix_counts,
    })
}

/// Reads a tagged corpus: one `token<TAB>tag` line per token, blank line
/// between sentences.
pub fn load_tagged(path: impl AsRef<Path>) -> Result<Vec<Vec<TaggedToken>>, TaggerError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| TaggerError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_tagged_str(&text)
}

/// [`load_tagged`] over in-memory text.
pub fn parse_tagged_str(text: &str) -> Result<Vec<Vec<TaggedToken>>, TaggerError> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(TaggerError::BadLine {
                line: i + 1,
                found: fields.len(),
            });
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(TaggerError::EmptyField { line: i + 1 });
        }
        current.push(TaggedToken::new(fields[0], fields[1]));
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

/// Writes tagged sentences in the two-column format read by [`load_tagged`].
pub fn save_tagged(
    sentences: &[Vec<TaggedToken>],
    path: impl AsRef<Path>,
) -> Result<(), TaggerError> {
    let path = path.as_ref();
    let mut out = String::new();
    for sentence in sentences {
        for tt in sentence {
            out.push_str(&tt.token);
            out.push('\t');
            out.push_str(&tt.tag);
            out.push('\n');
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| TaggerError::Io {
        path: path.display().to_string(),
        source,
    })
}

const MODEL_HEADER: &str = "stance-tagmodel v1";

/// Serializes the model as a versioned flat text file.
pub fn save_model(model: &TagModel, path: impl AsRef<Path>) -> Result<(), TaggerError> {
    let path = path.as_ref();
    std::fs::write(path, model_to_string(model)).map_err(|source| TaggerError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn model_to_string(model: &TagModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_HEADER}");
    let _ = writeln!(out, "tags {}", model.tags.len());
    for tag in &model.tags {
        let _ = writeln!(out, "{tag}");
    }
    let _ = writeln!(
        out,
        "lambdas {} {} {}",
        model.lambdas[0], model.lambdas[1], model.lambdas[2]
    );
    let _ = writeln!(out, "theta {}", model.theta);
    let _ = writeln!(out, "unigram-total {}", model.unigram_total);
    let _ = writeln!(out, "unigrams {}", model.unigrams.len());
    for (id, c) in &model.unigrams {
        let _ = writeln!(out, "{id} {c}");
    }
    let _ = writeln!(out, "bigrams {}", model.bigrams.len());
    for ((a, b), c) in &model.bigrams {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    let _ = writeln!(out, "bigram-contexts {}", model.bigram_contexts.len());
    for (a, c) in &model.bigram_contexts {
        let _ = writeln!(out, "{a} {c}");
    }
    let _ = writeln!(out, "trigrams {}", model.trigrams.len());
    for ((a, b, t), c) in &model.trigrams {
        let _ = writeln!(out, "{a} {b} {t} {c}");
    }
    let _ = writeln!(out, "trigram-contexts {}", model.trigram_contexts.len());
    for ((a, b), c) in &model.trigram_contexts {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    let emission_lines: usize = model.emissions.values().map(|m| m.len()).sum();
    let _ = writeln!(out, "emissions {emission_lines}");
    for (word, counts) in &model.emissions {
        for (id, c) in counts {
            let _ = writeln!(out, "{word}\t{id}\t{c}");
        }
    }
    let suffix_lines: usize = model.suffix_counts.values().map(|m| m.len()).sum();
    let _ = writeln!(out, "suffixes {suffix_lines}");
    for (suffix, counts) in &model.suffix_counts {
        for (id, c) in counts {
            let _ = writeln!(out, "{suffix}\t{id}\t{c}");
        }
    }
    out
}

/// Loads a model saved by [`save_model`].
pub fn load_model(path: impl AsRef<Path>) -> Result<TagModel, TaggerError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| TaggerError::Io {
        path: path.display().to_string(),
        source,
    })?;
    model_from_string(&text)
}

fn model_from_string(text: &str) -> Result<TagModel, TaggerError> {
    let mut lines = text.lines().enumerate();
    let mut next = |expect: &str| -> Result<(usize, String), TaggerError> {
        lines
            .next()
            .map(|(i, l)| (i + 1, l.to_string()))
            .ok_or_else(|| TaggerError::BadModel {
                line: 0,
                message: format!("unexpected end of file, expected {expect}"),
            })
    };
    let bad = |line: usize, message: &str| TaggerError::BadModel {
        line,
        message: message.to_string(),
    };

    let (line, header) = next("header")?;
    if header != MODEL_HEADER {
        return Err(bad(line, "unrecognized model header"));
    }

    fn section_count(line_no: usize, line: &str, name: &str) -> Result<usize, TaggerError> {
        let rest = line.strip_prefix(name).and_then(|r| r.strip_prefix(' '));
        rest.and_then(|r| r.trim().parse().ok())
            .ok_or(TaggerError::BadModel {
                line: line_no,
                message: format!("expected `{name} <count>`"),
            })
    }

    let (line_no, header) = next("tags")?;
    let n_tags = section_count(line_no, &header, "tags")?;
    let mut tags = Vec::with_capacity(n_tags);
    for _ in 0..n_tags {
        tags.push(next("tag name")?.1);
    }

    let (line_no, lambda_line) = next("lambdas")?;
    let parts: Vec<&str> = lambda_line.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "lambdas" {
        return Err(bad(line_no, "expected `lambdas <l1> <l2> <l3>`"));
    }
    let mut lambdas = [0.0; 3];
    for (i, p) in parts[1..].iter().enumerate() {
        lambdas[i] = p
            .parse()
            .map_err(|_| bad(line_no, "lambda is not a number"))?;
    }
    if (lambdas.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(bad(line_no, "lambdas do not sum to 1"));
    }

    let (line_no, theta_line) = next("theta")?;
    let theta = theta_line
        .strip_prefix("theta ")
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| bad(line_no, "expected `theta <value>`"))?;

    let (line_no, total_line) = next("unigram-total")?;
    let unigram_total = total_line
        .strip_prefix("unigram-total ")
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| bad(line_no, "expected `unigram-total <count>`"))?;

    macro_rules! numeric_section {
        ($name:literal, $fields:literal, $build:expr) => {{
            let (line_no, header) = next($name)?;
            let count = section_count(line_no, &header, $name)?;
            for _ in 0..count {
                let (line_no, line) = next("count line")?;
                let nums: Vec<u64> = line
                    .split_whitespace()
                    .map(|p| p.parse::<u64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad(line_no, "expected integers"))?;
                if nums.len() != $fields {
                    return Err(bad(line_no, "wrong field count"));
                }
                $build(&nums);
            }
        }};
    }

    let mut unigrams = BTreeMap::new();
    numeric_section!("unigrams", 2, |n: &Vec<u64>| {
        unigrams.insert(n[0] as u16, n[1]);
    });
    let mut bigrams = BTreeMap::new();
    numeric_section!("bigrams", 3, |n: &Vec<u64>| {
        bigrams.insert((n[0] as u16, n[1] as u16), n[2]);
    });
    let mut bigram_contexts = BTreeMap::new();
    numeric_section!("bigram-contexts", 2, |n: &Vec<u64>| {
        bigram_contexts.insert(n[0] as u16, n[1]);
    });
    let mut trigrams = BTreeMap::new();
    numeric_section!("trigrams", 4, |n: &Vec<u64>| {
        trigrams.insert((n[0] as u16, n[1] as u16, n[2] as u16), n[3]);
    });
    let mut trigram_contexts = BTreeMap::new();
    numeric_section!("trigram-contexts", 3, |n: &Vec<u64>| {
        trigram_contexts.insert((n[0] as u16, n[1] as u16), n[2]);
    });

    macro_rules! keyed_section {
        ($name:literal, $map:ident) => {{
            let (line_no, header) = next($name)?;
            let count = section_count(line_no, &header, $name)?;
            for _ in 0..count {
                let (line_no, line) = next("keyed line")?;
                let fields: Vec<&str> = line.split('\t').collect();
                if fields.len() != 3 {
                    return Err(bad(line_no, "expected `key<TAB>tag<TAB>count`"));
                }
                let id: u16 = fields[1]
                    .parse()
                    .map_err(|_| bad(line_no, "tag id is not an integer"))?;
                let c: u64 = fields[2]
                    .parse()
                    .map_err(|_| bad(line_no, "count is not an integer"))?;
                $map.entry(fields[0].to_string())
                    .or_insert_with(BTreeMap::new)
                    .insert(id, c);
            }
        }};
    }

    let mut emissions: BTreeMap<String, BTreeMap<u16, u64>> = BTreeMap::new();
    keyed_section!("emissions", emissions);
    let mut suffix_counts: BTreeMap<String, BTreeMap<u16, u64>> = BTreeMap::new();
    keyed_section!("suffixes", suffix_counts);

    Ok(TagModel {
        tags,
        unigrams,
        unigram_total,
        bigrams,
        bigram_contexts,
        trigrams,
        trigram_contexts,
        emissions,
        lambdas,
        theta,
        suffix_counts,
    })
}
