//! Arguing lexicon: regular-expression pattern files plus macro files.
//!
//! Pattern files hold one regular expression per non-comment line; macro
//! files define alternations like `@MODAL=(can|could|must)`. Every `@NAME`
//! reference is expanded before compilation, so matching can never fail at
//! lookup time. The category of a pattern is the stem of the file it came
//! from.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use regex::Regex;
use thiserror::Error;

/// One compiled arguing pattern.
#[derive(Debug, Clone)]
pub struct ArguingPattern {
    pub category: String,
    /// Macro-expanded pattern text, exactly as compiled.
    pub source: String,
    word_re: Regex,
    text_re: Regex,
}

/// All patterns from a set of pattern files, with macros resolved.
#[derive(Debug, Clone, Default)]
pub struct ArguingLexicon {
    patterns: Vec<ArguingPattern>,
    macros: HashMap<String, String>,
}

#[derive(Debug, Error)]
pub enum ArguingError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: malformed macro definition {text:?}")]
    BadMacro {
        file: String,
        line: usize,
        text: String,
    },
    #[error("{file}:{line}: undefined macro reference in {pattern:?}")]
    UndefinedMacro {
        file: String,
        line: usize,
        pattern: String,
    },
    #[error("macro {name} is defined cyclically")]
    MacroCycle { name: String },
    #[error("{file}:{line}: pattern fails to compile: {source}")]
    BadPattern {
        file: String,
        line: usize,
        #[source]
        source: Box<regex::Error>,
    },
}

impl ArguingLexicon {
    pub fn patterns(&self) -> &[ArguingPattern] {
        &self.patterns
    }

    /// Distinct category names, in pattern order.
    pub fn categories(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for p in &self.patterns {
            if !seen.contains(&p.category.as_str()) {
                seen.push(p.category.as_str());
            }
        }
        seen
    }

    /// Expansion text of a macro, if defined.
    pub fn macro_expansion(&self, name: &str) -> Option<&str> {
        self.macros.get(name).map(String::as_str)
    }
}

fn read(path: &Path) -> Result<String, ArguingError> {
    std::fs::read_to_string(path).map_err(|source| ArguingError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Replaces every defined `@NAME` in `text`. Longer macro names are replaced
/// first so a name that prefixes another cannot hijack it.
fn expand(text: &str, macros: &HashMap<String, String>) -> String {
    let mut names: Vec<&String> = macros.keys().collect();
    names.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut out = text.to_string();
    for name in names {
        if out.contains(name.as_str()) {
            out = out.replace(name.as_str(), &macros[name]);
        }
    }
    out
}

fn resolve_macro(
    name: &str,
    raw: &HashMap<String, String>,
    resolved: &mut HashMap<String, String>,
    in_progress: &mut Vec<String>,
) -> Result<String, ArguingError> {
    if let Some(done) = resolved.get(name) {
        return Ok(done.clone());
    }
    if in_progress.iter().any(|n| n == name) {
        return Err(ArguingError::MacroCycle {
            name: name.to_string(),
        });
    }
    in_progress.push(name.to_string());
    let mut body = raw[name].clone();
    // Resolve nested references, longest name first.
    let mut names: Vec<&String> = raw.keys().collect();
    names.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    for other in names {
        if other != name && body.contains(other.as_str()) {
            let expansion = resolve_macro(other, raw, resolved, in_progress)?;
            body = body.replace(other.as_str(), &expansion);
        }
    }
    in_progress.pop();
    resolved.insert(name.to_string(), body.clone());
    Ok(body)
}

/// Parses arguing pattern files and macro files into a compiled lexicon.
/// Every `@NAME` occurrence in a pattern is replaced by its alternation
/// before compilation; a leftover `@` means an undefined macro and is an
/// error at parse time.
pub fn parse_arguing(
    pattern_paths: &[PathBuf],
    macro_paths: &[PathBuf],
) -> Result<ArguingLexicon, ArguingError> {
    let mut raw_macros: HashMap<String, String> = HashMap::new();
    for path in macro_paths {
        let text = read(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, body) = line.split_once('=').ok_or_else(|| ArguingError::BadMacro {
                file: path.display().to_string(),
                line: i + 1,
                text: line.to_string(),
            })?;
            let name = name.trim();
            if !name.starts_with('@') || name.len() < 2 {
                return Err(ArguingError::BadMacro {
                    file: path.display().to_string(),
                    line: i + 1,
                    text: line.to_string(),
                });
            }
            raw_macros.insert(name.to_string(), body.trim().to_string());
        }
    }

    let mut macros: HashMap<String, String> = HashMap::new();
    let names: Vec<String> = raw_macros.keys().cloned().collect();
    for name in names {
        let mut stack = Vec::new();
        resolve_macro(&name, &raw_macros, &mut macros, &mut stack)?;
    }

    let mut patterns = Vec::new();
    for path in pattern_paths {
        let category = file_stem(path);
        let text = read(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let expanded = expand(line, &macros);
            if expanded.contains('@') {
                return Err(ArguingError::UndefinedMacro {
                    file: path.display().to_string(),
                    line: i + 1,
                    pattern: line.to_string(),
                });
            }
            let compile = |pattern: &str| {
                Regex::new(pattern).map_err(|e| ArguingError::BadPattern {
                    file: path.display().to_string(),
                    line: i + 1,
                    source: Box::new(e),
                })
            };
            let word_re = compile(&format!("(?i)^(?:{expanded})$"))?;
            let text_re = compile(&format!("(?i){expanded}"))?;
            patterns.push(ArguingPattern {
                category: category.clone(),
                source: expanded,
                word_re,
                text_re,
            });
        }
    }
    Ok(ArguingLexicon { patterns, macros })
}

/// True if any pattern matches the whole word. This is the default
/// word-level matching; multi-word patterns can only fire in
/// [`match_arguing_text`].
pub fn match_arguing(lexicon: &ArguingLexicon, word: &str) -> bool {
    !word.is_empty() && lexicon.patterns.iter().any(|p| p.word_re.is_match(word))
}

/// True if any pattern matches anywhere in the text. Off the default path;
/// kept for sensitivity experiments.
pub fn match_arguing_text(lexicon: &ArguingLexicon, text: &str) -> bool {
    lexicon.patterns.iter().any(|p| p.text_re.is_match(text))
}
