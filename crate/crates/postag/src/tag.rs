//! The Penn Treebank tag inventory.
//!
//! The set is closed by default: parsing an unknown symbol is an error
//! unless the caller opts into extra tags.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The 36 word-level Penn Treebank tags.
pub const WORD_TAGS: [&str; 36] = [
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNP", "NNPS",
    "NNS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD",
    "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB",
];

/// Punctuation tags.
pub const PUNCT_TAGS: [&str; 9] = [".", ",", ":", "``", "''", "-LRB-", "-RRB-", "$", "#"];

/// A part-of-speech tag. Ordering and equality are on the symbol string,
/// so ties in downstream argmax operations break lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tag(String);

impl Tag {
    /// Parse a symbol from the closed tag set.
    pub fn parse(symbol: &str) -> Result<Tag> {
        Tag::parse_with(symbol, false)
    }

    /// Parse a symbol, optionally admitting tags outside the closed set.
    pub fn parse_with(symbol: &str, allow_extra: bool) -> Result<Tag> {
        if Tag::is_known(symbol) {
            return Ok(Tag(symbol.to_string()));
        }
        if allow_extra && !symbol.is_empty() && !symbol.chars().any(|c| c.is_whitespace()) {
            return Ok(Tag(symbol.to_string()));
        }
        Err(Error::UnknownTag {
            symbol: symbol.to_string(),
        })
    }

    pub fn symbol(&self) -> &str {
        &self.0
    }

    pub fn is_known(symbol: &str) -> bool {
        WORD_TAGS.contains(&symbol) || PUNCT_TAGS.contains(&symbol)
    }

    pub fn is_punct(&self) -> bool {
        PUNCT_TAGS.contains(&self.0.as_str())
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag({})", self.0)
    }
}

impl std::str::FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tag> {
        Tag::parse(s)
    }
}

/// All known tags in lexicographic order.
pub fn known_tags() -> Vec<Tag> {
    let mut all: Vec<Tag> = WORD_TAGS
        .iter()
        .chain(PUNCT_TAGS.iter())
        .map(|s| Tag(s.to_string()))
        .collect();
    all.sort();
    all
}

/// Shorthand for tags known to be in the closed set; panics otherwise.
/// Intended for literals in code and tests.
pub fn tag(symbol: &str) -> Tag {
    Tag::parse(symbol).expect("tag literal must be in the closed tag set")
}
