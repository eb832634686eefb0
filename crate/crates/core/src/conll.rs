//! CoNLL-style dependency parse files and dependency-triple extraction.
//!
//! Files are tab-separated, one token per line, blank line between
//! sentences. Column positions vary between producers, so a [`ConllColumns`]
//! mapping says where index/form/lemma/pos/head/deprel live; presets cover
//! the 10-column CoNLL-X layout and the 7-column CoreNLP layout.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One token of a dependency-parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConllToken {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub pos: String,
    /// 0 means the syntactic root.
    pub head: usize,
    pub deprel: String,
}

/// A parsed sentence.
pub type ConllSentence = Vec<ConllToken>;

/// (dependent, head, label) extracted from one token.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DepTriple {
    pub dependent_form: String,
    /// `"ROOT"` when the token hangs off the artificial root.
    pub head_form: String,
    pub label: String,
}

impl DepTriple {
    /// Feature-name form: `dependent|head|label`.
    pub fn feature_name(&self) -> String {
        format!(
            "{}|{}|{}",
            self.dependent_form, self.head_form, self.label
        )
    }
}

/// Column positions (zero-based) within a token line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConllColumns {
    pub index: usize,
    pub form: usize,
    pub lemma: usize,
    pub pos: usize,
    pub head: usize,
    pub deprel: usize,
    /// Total columns a line must have; extra columns beyond the mapped ones
    /// (FEATS, PHEAD, NER, ...) are ignored.
    pub width: usize,
}

impl ConllColumns {
    /// 10-column CoNLL-X: ID FORM LEMMA CPOSTAG POSTAG FEATS HEAD DEPREL PHEAD PDEPREL.
    pub fn conllx() -> Self {
        ConllColumns {
            index: 0,
            form: 1,
            lemma: 2,
            pos: 4,
            head: 6,
            deprel: 7,
            width: 10,
        }
    }

    /// 7-column CoreNLP output: IDX WORD LEMMA POS NER HEAD DEPREL.
    pub fn corenlp() -> Self {
        ConllColumns {
            index: 0,
            form: 1,
            lemma: 2,
            pos: 3,
            head: 5,
            deprel: 6,
            width: 7,
        }
    }

    /// Named preset lookup (`"conllx"` / `"corenlp"`).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "conllx" => Some(Self::conllx()),
            "corenlp" => Some(Self::corenlp()),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConllError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected {expected} columns, found {found}")]
    WrongColumnCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {field} is not an integer: {value:?}")]
    NotAnInteger {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("sentence ending at line {line}: token indices are not consecutive from 1")]
    NonConsecutiveIndices { line: usize },
    #[error("sentence ending at line {line}: head {head} out of range for {len} tokens")]
    HeadOutOfRange { line: usize, head: usize, len: usize },
    #[error("alignment sidecar {path} line {line}: not a count: {value:?}")]
    BadAlignment {
        path: String,
        line: usize,
        value: String,
    },
    #[error("alignment covers {expected} sentences but the file has {found}")]
    AlignmentMismatch { expected: usize, found: usize },
}

fn finish_sentence(
    sentence: Vec<ConllToken>,
    line: usize,
    out: &mut Vec<ConllSentence>,
) -> Result<(), ConllError> {
    if sentence.is_empty() {
        return Ok(());
    }
    for (i, token) in sentence.iter().enumerate() {
        if token.index != i + 1 {
            return Err(ConllError::NonConsecutiveIndices { line });
        }
        if token.head > sentence.len() {
            return Err(ConllError::HeadOutOfRange {
                line,
                head: token.head,
                len: sentence.len(),
            });
        }
    }
    out.push(sentence);
    Ok(())
}

/// Loads a CoNLL file into sentences of tokens.
pub fn load_conll(
    path: impl AsRef<Path>,
    columns: &ConllColumns,
) -> Result<Vec<ConllSentence>, ConllError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConllError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_conll_str(&text, columns)
}

/// [`load_conll`] over in-memory text.
pub fn parse_conll_str(
    text: &str,
    columns: &ConllColumns,
) -> Result<Vec<ConllSentence>, ConllError> {
    let mut sentences = Vec::new();
    let mut current: Vec<ConllToken> = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            finish_sentence(std::mem::take(&mut current), last_line, &mut sentences)?;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != columns.width {
            return Err(ConllError::WrongColumnCount {
                line: line_no,
                expected: columns.width,
                found: fields.len(),
            });
        }
        let parse_int = |field: &'static str, idx: usize| -> Result<usize, ConllError> {
            fields[idx]
                .trim()
                .parse::<usize>()
                .map_err(|_| ConllError::NotAnInteger {
                    line: line_no,
                    field,
                    value: fields[idx].to_string(),
                })
        };
        current.push(ConllToken {
            index: parse_int("index", columns.index)?,
            form: fields[columns.form].to_string(),
            lemma: fields[columns.lemma].to_string(),
            pos: fields[columns.pos].to_string(),
            head: parse_int("head", columns.head)?,
            deprel: fields[columns.deprel].to_string(),
        });
        last_line = line_no;
    }
    finish_sentence(current, last_line, &mut sentences)?;
    Ok(sentences)
}

/// Writes sentences back out under the same column mapping, filling unmapped
/// columns with `_`. Loading the output reproduces the input sentences.
pub fn save_conll(
    sentences: &[ConllSentence],
    path: impl AsRef<Path>,
    columns: &ConllColumns,
) -> Result<(), ConllError> {
    let path = path.as_ref();
    let mut out = String::new();
    for sentence in sentences {
        for token in sentence {
            let mut fields = vec!["_".to_string(); columns.width];
            fields[columns.index] = token.index.to_string();
            fields[columns.form] = token.form.clone();
            fields[columns.lemma] = token.lemma.clone();
            fields[columns.pos] = token.pos.clone();
            fields[columns.head] = token.head.to_string();
            fields[columns.deprel] = token.deprel.clone();
            out.push_str(&fields.join("\t"));
            out.push('\n');
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| ConllError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Extracts one (dependent, head, label) triple per token, in token order.
/// Forms are lowercased so triple features share normalization with
/// bag-of-words features.
pub fn extract_dep_triples(sentence: &[ConllToken]) -> Vec<DepTriple> {
    sentence
        .iter()
        .map(|token| {
            let head_form = if token.head == 0 {
                "ROOT".to_string()
            } else {
                sentence[token.head - 1].form.to_lowercase()
            };
            DepTriple {
                dependent_form: token.form.to_lowercase(),
                head_form,
                label: token.deprel.clone(),
            }
        })
        .collect()
}

/// Reads a sentence-count sidecar: one integer per text unit, mapping the
/// flat sentence list back to the units that produced them.
pub fn load_alignment(path: impl AsRef<Path>) -> Result<Vec<usize>, ConllError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConllError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut counts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        counts.push(line.parse::<usize>().map_err(|_| ConllError::BadAlignment {
            path: path.display().to_string(),
            line: i + 1,
            value: line.to_string(),
        })?);
    }
    Ok(counts)
}

/// Groups a flat sentence list into per-unit batches according to the
/// sidecar counts. Errors if the counts do not cover the file exactly.
pub fn group_sentences(
    sentences: Vec<ConllSentence>,
    counts: &[usize],
) -> Result<Vec<Vec<ConllSentence>>, ConllError> {
    let expected: usize = counts.iter().sum();
    if expected != sentences.len() {
        return Err(ConllError::AlignmentMismatch {
            expected,
            found: sentences.len(),
        });
    }
    let mut iter = sentences.into_iter();
    Ok(counts
        .iter()
        .map(|&n| iter.by_ref().take(n).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line10(idx: usize, form: &str, pos: &str, head: usize, rel: &str) -> String {
        format!("{idx}\t{form}\t{form}\t_\t{pos}\t_\t{head}\t{rel}\t_\t_")
    }

    #[test]
    fn parses_three_token_sentence() {
        let text = format!(
            "{}\n{}\n{}\n",
            line10(1, "We", "PRP", 2, "nsubj"),
            line10(2, "love", "VBP", 0, "root"),
            line10(3, "God", "NNP", 2, "dobj"),
        );
        let sentences = parse_conll_str(&text, &ConllColumns::conllx()).unwrap();
        assert_eq!(sentences.len(), 1);
        assert_eq!(sentences[0].len(), 3);
        assert_eq!(sentences[0][1].form, "love");
        assert_eq!(sentences[0][1].head, 0);
    }

    #[test]
    fn empty_file_gives_no_sentences() {
        assert!(parse_conll_str("", &ConllColumns::conllx())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn corenlp_preset_ignores_ner_column() {
        let text = "1\tWe\twe\tPRP\tO\t2\tnsubj\n2\tlove\tlove\tVBP\tO\t0\troot\n";
        let sentences = parse_conll_str(text, &ConllColumns::corenlp()).unwrap();
        assert_eq!(sentences[0][0].pos, "PRP");
        assert_eq!(sentences[0][1].deprel, "root");
    }

    #[test]
    fn wrong_column_count_is_reported_with_line() {
        let text = "1\tWe\twe\n";
        let err = parse_conll_str(text, &ConllColumns::conllx()).unwrap_err();
        assert!(matches!(
            err,
            ConllError::WrongColumnCount { line: 1, found: 3, .. }
        ));
    }

    #[test]
    fn non_integer_head_is_rejected() {
        let text = line10(1, "x", "NN", 0, "root").replace("\t0\t", "\tzero\t");
        let err = parse_conll_str(&text, &ConllColumns::conllx()).unwrap_err();
        assert!(matches!(err, ConllError::NotAnInteger { field: "head", .. }));
    }

    #[test]
    fn head_out_of_range_is_rejected() {
        let text = format!("{}\n", line10(1, "x", "NN", 5, "root"));
        let err = parse_conll_str(&text, &ConllColumns::conllx()).unwrap_err();
        assert!(matches!(err, ConllError::HeadOutOfRange { head: 5, len: 1, .. }));
    }

    #[test]
    fn non_consecutive_indices_rejected() {
        let text = format!(
            "{}\n{}\n",
            line10(1, "x", "NN", 0, "root"),
            line10(3, "y", "NN", 1, "dep"),
        );
        let err = parse_conll_str(&text, &ConllColumns::conllx()).unwrap_err();
        assert!(matches!(err, ConllError::NonConsecutiveIndices { .. }));
    }

    #[test]
    fn triples_follow_heads_and_root() {
        let text = format!(
            "{}\n{}\n{}\n",
            line10(1, "We", "PRP", 2, "nsubj"),
            line10(2, "love", "VBP", 0, "root"),
            line10(3, "God", "NNP", 2, "dobj"),
        );
        let sentences = parse_conll_str(&text, &ConllColumns::conllx()).unwrap();
        let triples = extract_dep_triples(&sentences[0]);
        assert_eq!(
            triples,
            vec![
                DepTriple {
                    dependent_form: "we".into(),
                    head_form: "love".into(),
                    label: "nsubj".into()
                },
                DepTriple {
                    dependent_form: "love".into(),
                    head_form: "ROOT".into(),
                    label: "root".into()
                },
                DepTriple {
                    dependent_form: "god".into(),
                    head_form: "love".into(),
                    label: "dobj".into()
                },
            ]
        );
        assert_eq!(triples[0].feature_name(), "we|love|nsubj");
    }

    #[test]
    fn single_token_sentence_yields_root_triple() {
        let text = format!("{}\n", line10(1, "Wow", "UH", 0, "discourse"));
        let sentences = parse_conll_str(&text, &ConllColumns::conllx()).unwrap();
        let triples = extract_dep_triples(&sentences[0]);
        assert_eq!(triples.len(), 1);
        assert_eq!(triples[0].head_form, "ROOT");
    }

    #[test]
    fn triple_count_equals_token_count() {
        let text = format!(
            "{}\n{}\n{}\n{}\n{}\n",
            line10(1, "a", "DT", 2, "det"),
            line10(2, "b", "NN", 3, "nsubj"),
            line10(3, "c", "VB", 0, "root"),
            line10(4, "d", "DT", 5, "det"),
            line10(5, "e", "NN", 3, "dobj"),
        );
        let sentences = parse_conll_str(&text, &ConllColumns::conllx()).unwrap();
        assert_eq!(extract_dep_triples(&sentences[0]).len(), 5);
    }

    #[test]
    fn save_then_load_round_trips() {
        let text = format!(
            "{}\n{}\n\n{}\n",
            line10(1, "We", "PRP", 2, "nsubj"),
            line10(2, "left", "VBD", 0, "root"),
            line10(1, "Stay", "VB", 0, "root"),
        );
        for columns in [ConllColumns::conllx(), ConllColumns::corenlp()] {
            let sentences = parse_conll_str(&text, &ConllColumns::conllx()).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("out.conll");
            save_conll(&sentences, &path, &columns).unwrap();
            let reloaded = load_conll(&path, &columns).unwrap();
            // lemma/pos survive only where the layout keeps them; compare on
            // the shared fields.
            assert_eq!(reloaded.len(), sentences.len());
            for (a, b) in reloaded.iter().flatten().zip(sentences.iter().flatten()) {
                assert_eq!(a.index, b.index);
                assert_eq!(a.form, b.form);
                assert_eq!(a.head, b.head);
                assert_eq!(a.deprel, b.deprel);
                assert_eq!(a.pos, b.pos);
            }
        }
    }

    #[test]
    fn alignment_grouping_distributes_sentences() {
        let s = |form: &str| {
            vec![ConllToken {
                index: 1,
                form: form.into(),
                lemma: form.into(),
                pos: "NN".into(),
                head: 0,
                deprel: "root".into(),
            }]
        };
        let sentences = vec![s("a"), s("b"), s("c")];
        let grouped = group_sentences(sentences.clone(), &[2, 0, 1]).unwrap();
        assert_eq!(grouped.len(), 3);
        assert_eq!(grouped[0].len(), 2);
        assert_eq!(grouped[1].len(), 0);
        assert_eq!(grouped[2].len(), 1);
        assert!(group_sentences(sentences, &[1, 1]).is_err());
    }
}
