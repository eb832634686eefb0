//! MPQA subjectivity lexicon parsing and polarity lookup.
//!
//! The lexicon is a text file of `key=value` lines, e.g.
//!
//! ```text
//! type=weaksubj len=1 word1=abandoned pos1=adj stemmed1=n priorpolarity=negative
//! ```
//!
//! A word may have several entries (different parts of speech, stemmed and
//! unstemmed variants). Lookup resolves a word to a weight in `{-1, 0, +1}`:
//! the surface form is tried against unstemmed entries first, then the
//! Porter stem against stemmed entries.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use super::porter::stem;

/// Subjectivity strength of an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strength {
    Weak,
    Strong,
}

/// Prior polarity of an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
    Both,
}

impl Polarity {
    fn weight(self) -> i8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
            Polarity::Neutral | Polarity::Both => 0,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
            Polarity::Both => "both",
        };
        f.write_str(s)
    }
}

/// One lexicon line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpqaEntry {
    pub word: String,
    pub pos: String,
    pub is_stemmed: bool,
    pub strength: Strength,
    pub polarity: Polarity,
}

/// The parsed lexicon, indexed by word. Multiple entries per word are kept.
#[derive(Debug, Clone, Default)]
pub struct MpqaLexicon {
    entries: HashMap<String, Vec<MpqaEntry>>,
    len: usize,
}

#[derive(Debug, Error)]
pub enum MpqaError {
    #[error("cannot read MPQA lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: missing required field {field}")]
    MissingField { line: usize, field: &'static str },
    #[error("line {line}: unknown polarity value {value:?}")]
    UnknownPolarity { line: usize, value: String },
}

impl MpqaLexicon {
    /// Number of entries (lines) in the lexicon.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// All entries for a word, in file order.
    pub fn entries(&self, word: &str) -> &[MpqaEntry] {
        self.entries.get(word).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Parses an MPQA subjectivity lexicon file. Blank lines are skipped; tokens
/// without `=` are ignored (the distributed file carries a few stray
/// annotation marks).
pub fn parse_mpqa(path: impl AsRef<Path>) -> Result<MpqaLexicon, MpqaError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| MpqaError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_mpqa_str(&text)
}

/// [`parse_mpqa`] over in-memory text.
pub fn parse_mpqa_str(text: &str) -> Result<MpqaLexicon, MpqaError> {
    let mut lexicon = MpqaLexicon::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for token in line.split_whitespace() {
            if let Some((key, value)) = token.split_once('=') {
                fields.insert(key, value);
            }
        }
        let word = *fields.get("word1").ok_or(MpqaError::MissingField {
            line: line_no,
            field: "word1",
        })?;
        let polarity_str = *fields.get("priorpolarity").ok_or(MpqaError::MissingField {
            line: line_no,
            field: "priorpolarity",
        })?;
        // The distributed lexicon carries a few strength-prefixed variants
        // (e.g. weakneg); they map to their base polarity.
        let polarity = match polarity_str.to_ascii_lowercase().as_str() {
            "positive" | "weakpos" | "strongpos" => Polarity::Positive,
            "negative" | "weakneg" | "strongneg" => Polarity::Negative,
            "neutral" => Polarity::Neutral,
            "both" => Polarity::Both,
            other => {
                return Err(MpqaError::UnknownPolarity {
                    line: line_no,
                    value: other.to_string(),
                })
            }
        };
        let strength = match fields.get("type").copied() {
            Some("strongsubj") => Strength::Strong,
            _ => Strength::Weak,
        };
        let entry = MpqaEntry {
            word: word.to_string(),
            pos: fields.get("pos1").copied().unwrap_or("").to_string(),
            is_stemmed: fields.get("stemmed1").copied() == Some("y"),
            strength,
            polarity,
        };
        lexicon
            .entries
            .entry(entry.word.clone())
            .or_default()
            .push(entry);
        lexicon.len += 1;
    }
    Ok(lexicon)
}

/// Resolves a word against the lexicon: `None` when nothing matches, else
/// the polarity weight. The surface form is matched against unstemmed
/// entries; failing that, the Porter stem is matched against stemmed
/// entries. When matched entries conflict, strong entries outrank weak ones,
/// and a conflict left at the same strength resolves to 0.
pub fn lookup(lexicon: &MpqaLexicon, word: &str) -> Option<i8> {
    let surface: Vec<&MpqaEntry> = lexicon
        .entries(word)
        .iter()
        .filter(|e| !e.is_stemmed)
        .collect();
    let matched: Vec<&MpqaEntry> = if !surface.is_empty() {
        surface
    } else {
        lexicon
            .entries(&stem(word))
            .iter()
            .filter(|e| e.is_stemmed)
            .collect()
    };
    if matched.is_empty() {
        return None;
    }
    let any_strong = matched.iter().any(|e| e.strength == Strength::Strong);
    let preferred = matched
        .iter()
        .filter(|e| !any_strong || e.strength == Strength::Strong);
    let mut weights: Vec<i8> = preferred.map(|e| e.polarity.weight()).collect();
    weights.sort_unstable();
    weights.dedup();
    match weights.as_slice() {
        [single] => Some(*single),
        _ => Some(0),
    }
}

/// Polarity weight of a word: `+1` positive, `-1` negative, `0` for neutral,
/// `both`, and no-match.
pub fn lookup_polarity(lexicon: &MpqaLexicon, word: &str) -> i8 {
    lookup(lexicon, word).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
type=weaksubj len=1 word1=abandoned pos1=adj stemmed1=n priorpolarity=negative
type=weaksubj len=1 word1=abandon pos1=verb stemmed1=y priorpolarity=negative
type=strongsubj len=1 word1=admirable pos1=adj stemmed1=n priorpolarity=positive
type=weaksubj len=1 word1=ador pos1=verb stemmed1=y priorpolarity=positive
type=weaksubj len=1 word1=aim pos1=verb stemmed1=y priorpolarity=neutral
";

    #[test]
    fn parses_sample_line_fields() {
        let lex = parse_mpqa_str(SAMPLE).unwrap();
        let entries = lex.entries("abandoned");
        assert_eq!(entries.len(), 1);
        assert_eq!(
            entries[0],
            MpqaEntry {
                word: "abandoned".into(),
                pos: "adj".into(),
                is_stemmed: false,
                strength: Strength::Weak,
                polarity: Polarity::Negative,
            }
        );
    }

    #[test]
    fn empty_file_gives_empty_lexicon() {
        let lex = parse_mpqa_str("").unwrap();
        assert!(lex.is_empty());
    }

    #[test]
    fn duplicate_words_keep_both_entries() {
        let text = "\
type=weaksubj len=1 word1=mean pos1=adj stemmed1=n priorpolarity=negative
type=weaksubj len=1 word1=mean pos1=verb stemmed1=n priorpolarity=neutral
";
        let lex = parse_mpqa_str(text).unwrap();
        assert_eq!(lex.entries("mean").len(), 2);
        assert_eq!(lex.len(), 2);
    }

    #[test]
    fn missing_word_reports_line() {
        let err = parse_mpqa_str("type=weaksubj priorpolarity=negative\n").unwrap_err();
        match err {
            MpqaError::MissingField { line, field } => {
                assert_eq!(line, 1);
                assert_eq!(field, "word1");
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn unknown_polarity_is_rejected() {
        let err =
            parse_mpqa_str("type=weaksubj word1=x priorpolarity=sideways\n").unwrap_err();
        assert!(matches!(err, MpqaError::UnknownPolarity { line: 1, .. }));
    }

    #[test]
    fn strength_prefixed_polarities_map_to_base() {
        let lex = parse_mpqa_str(
            "type=weaksubj word1=grim pos1=adj stemmed1=n priorpolarity=weakneg\n",
        )
        .unwrap();
        assert_eq!(lex.entries("grim")[0].polarity, Polarity::Negative);
    }

    #[test]
    fn lookup_maps_polarity_to_weights() {
        let lex = parse_mpqa_str(SAMPLE).unwrap();
        assert_eq!(lookup_polarity(&lex, "admirable"), 1);
        assert_eq!(lookup_polarity(&lex, "abandoned"), -1);
        assert_eq!(lookup_polarity(&lex, "unlisted"), 0);
    }

    #[test]
    fn lookup_falls_back_to_stemmed_entries() {
        let lex = parse_mpqa_str(SAMPLE).unwrap();
        // "adoring" stems to "ador", which only exists as a stemmed entry.
        assert_eq!(lookup_polarity(&lex, "adoring"), 1);
        assert_eq!(lookup_polarity(&lex, "adore"), 1);
        // "abandoning" -> stem "abandon" -> negative stemmed entry.
        assert_eq!(lookup_polarity(&lex, "abandoning"), -1);
        // neutral stemmed entry
        assert_eq!(lookup_polarity(&lex, "aiming"), 0);
    }

    #[test]
    fn surface_match_takes_priority_over_stem() {
        let text = "\
type=weaksubj len=1 word1=loved pos1=adj stemmed1=n priorpolarity=negative
type=weaksubj len=1 word1=love pos1=verb stemmed1=y priorpolarity=positive
";
        let lex = parse_mpqa_str(text).unwrap();
        assert_eq!(lookup_polarity(&lex, "loved"), -1);
        assert_eq!(lookup_polarity(&lex, "loving"), 1);
    }

    #[test]
    fn conflicts_prefer_strong_then_zero() {
        let text = "\
type=weaksubj len=1 word1=sharp pos1=adj stemmed1=n priorpolarity=positive
type=strongsubj len=1 word1=sharp pos1=verb stemmed1=n priorpolarity=negative
type=weaksubj len=1 word1=dull pos1=adj stemmed1=n priorpolarity=positive
type=weaksubj len=1 word1=dull pos1=verb stemmed1=n priorpolarity=negative
";
        let lex = parse_mpqa_str(text).unwrap();
        assert_eq!(lookup_polarity(&lex, "sharp"), -1);
        assert_eq!(lookup_polarity(&lex, "dull"), 0);
    }

    #[test]
    fn lookup_range_is_bounded() {
        let lex = parse_mpqa_str(SAMPLE).unwrap();
        for word in ["admirable", "abandoned", "aim", "zzz", "", "adoring"] {
            let w = lookup_polarity(&lex, word);
            assert!((-1..=1).contains(&w));
        }
    }
}
