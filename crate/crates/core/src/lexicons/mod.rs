//! Subjectivity and arguing lexicons: parsing, stemming, and lookup.

pub mod arguing;
pub mod mpqa;
pub mod porter;

pub use arguing::{match_arguing, match_arguing_text, parse_arguing, ArguingError, ArguingLexicon};
pub use mpqa::{lookup, lookup_polarity, parse_mpqa, parse_mpqa_str, MpqaEntry, MpqaError, MpqaLexicon};
pub use porter::stem;
