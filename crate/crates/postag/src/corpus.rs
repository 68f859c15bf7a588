//! Tagged-text domain types and corpus IO.
//!
//! Two file formats are supported: the inline `word/TAG` format (one
//! sentence per line, split on the last slash) and a columnar
//! `word<TAB>TAG` format with blank-line sentence separators.

use crate::error::{Error, Result};
use crate::tag::Tag;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Token {
    pub text: String,
    pub tag: Option<Tag>,
}

impl Token {
    pub fn new(text: impl Into<String>, tag: Option<Tag>) -> Token {
        let text = text.into();
        debug_assert!(!text.is_empty() && !text.chars().any(|c| c.is_whitespace()));
        Token { text, tag }
    }

    pub fn tagged(text: impl Into<String>, tag: Tag) -> Token {
        Token::new(text, Some(tag))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Sentence {
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Sentence {
        Sentence { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.text.clone()).collect()
    }

    pub fn tags(&self) -> Option<Vec<Tag>> {
        self.tokens.iter().map(|t| t.tag.clone()).collect()
    }

    pub fn is_tagged(&self) -> bool {
        self.tokens.iter().all(|t| t.tag.is_some())
    }

    /// Copy of this sentence with the given tag sequence.
    pub fn with_tags(&self, tags: &[Tag]) -> Sentence {
        assert_eq!(tags.len(), self.tokens.len());
        Sentence::new(
            self.tokens
                .iter()
                .zip(tags)
                .map(|(t, tag)| Token::tagged(t.text.clone(), tag.clone()))
                .collect(),
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Corpus {
    pub sentences: Vec<Sentence>,
    pub source_name: String,
}

impl Corpus {
    pub fn new(sentences: Vec<Sentence>, source_name: impl Into<String>) -> Corpus {
        Corpus {
            sentences,
            source_name: source_name.into(),
        }
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn is_tagged(&self) -> bool {
        self.sentences.iter().all(Sentence::is_tagged)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Slash,
    Columnar,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Format::Slash => f.write_str("slash"),
            Format::Columnar => f.write_str("columnar"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept tag symbols outside the closed Penn Treebank set.
    pub allow_extra_tags: bool,
}

fn parse_tag_at(symbol: &str, opts: ParseOptions, line: usize, col: usize) -> Result<Tag> {
    Tag::parse_with(symbol, opts.allow_extra_tags).map_err(|e| Error::Parse {
        line,
        col,
        msg: e.to_string(),
    })
}

/// Parse the inline `word/TAG` format: one sentence per line, tokens
/// whitespace-separated, each split on its last slash. Blank lines are
/// skipped. Empty input yields an empty corpus.
pub fn parse_slash(text: &str, opts: ParseOptions) -> Result<Corpus> {
    let mut sentences = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = Vec::new();
        // (1-based char column, piece) for every whitespace-separated piece
        let mut pieces: Vec<(usize, &str)> = Vec::new();
        let mut start: Option<(usize, usize)> = None; // (byte, col)
        for (colno, (byte, ch)) in line.char_indices().enumerate() {
            if ch.is_whitespace() {
                if let Some((b, c)) = start.take() {
                    pieces.push((c, &line[b..byte]));
                }
            } else if start.is_none() {
                start = Some((byte, colno + 1));
            }
        }
        if let Some((b, c)) = start {
            pieces.push((c, &line[b..]));
        }
        for (col, piece) in pieces {
            let Some(slash) = piece.rfind('/') else {
                return Err(Error::Parse {
                    line: lineno + 1,
                    col,
                    msg: format!("token `{piece}` has no `/` separator"),
                });
            };
            let (word, tag_sym) = (&piece[..slash], &piece[slash + 1..]);
            if word.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    col,
                    msg: format!("token `{piece}` has an empty word"),
                });
            }
            let tag = parse_tag_at(tag_sym, opts, lineno + 1, col)?;
            tokens.push(Token::tagged(word, tag));
        }
        sentences.push(Sentence::new(tokens));
    }
    Ok(Corpus::new(sentences, "slash"))
}

/// Parse the columnar `word<TAB>TAG` format; a blank line terminates a
/// sentence, the final blank line is optional.
pub fn parse_columnar(text: &str, opts: ParseOptions) -> Result<Corpus> {
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(Sentence::new(std::mem::take(&mut current)));
            }
            continue;
        }
        let Some((word, tag_sym)) = line.split_once('\t') else {
            return Err(Error::Parse {
                line: lineno + 1,
                col: 1,
                msg: format!("expected `word<TAB>TAG`, got `{line}`"),
            });
        };
        if word.is_empty() || word.chars().any(|c| c.is_whitespace()) {
            return Err(Error::Parse {
                line: lineno + 1,
                col: 1,
                msg: format!("invalid word field `{word}`"),
            });
        }
        let tag = parse_tag_at(tag_sym, opts, lineno + 1, word.chars().count() + 2)?;
        current.push(Token::tagged(word, tag));
    }
    if !current.is_empty() {
        sentences.push(Sentence::new(current));
    }
    Ok(Corpus::new(sentences, "columnar"))
}

/// Parse untagged text: one sentence per line, whitespace-tokenized.
pub fn parse_plain(text: &str) -> Corpus {
    let sentences = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            Sentence::new(
                l.split_whitespace()
                    .map(|w| Token::new(w, None))
                    .collect(),
            )
        })
        .collect();
    Corpus::new(sentences, "plain")
}

/// Serialize a fully tagged corpus. `parse(serialize(c)) == c`.
pub fn serialize(corpus: &Corpus, format: Format) -> Result<String> {
    let mut out = String::new();
    for (si, sentence) in corpus.sentences.iter().enumerate() {
        for (ti, token) in sentence.tokens.iter().enumerate() {
            let tag = token.tag.as_ref().ok_or_else(|| Error::UntaggedToken {
                text: token.text.clone(),
                sentence: si,
                index: ti,
            })?;
            match format {
                Format::Slash => {
                    if ti > 0 {
                        out.push(' ');
                    }
                    out.push_str(&token.text);
                    out.push('/');
                    out.push_str(tag.symbol());
                }
                Format::Columnar => {
                    out.push_str(&token.text);
                    out.push('\t');
                    out.push_str(tag.symbol());
                    out.push('\n');
                }
            }
        }
        match format {
            Format::Slash => out.push('\n'),
            Format::Columnar => out.push('\n'),
        }
    }
    Ok(out)
}

/// One fold of a k-fold split: disjoint train/test sentence indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FoldSplit {
    pub fold_index: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffle sentence indices with a seeded generator and deal them
/// round-robin into k test sets. Deterministic for a given seed; fold
/// sizes differ by at most one.
pub fn kfold_split(corpus: &Corpus, k: usize, seed: u64) -> Result<Vec<FoldSplit>> {
    let n = corpus.sentences.len();
    if k < 2 || k > n {
        return Err(Error::InvalidFoldCount { k, n });
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);

    let mut tests: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (pos, &idx) in indices.iter().enumerate() {
        tests[pos % k].push(idx);
    }
    Ok(tests
        .into_iter()
        .enumerate()
        .map(|(fold_index, mut test)| {
            test.sort_unstable();
            let mut train: Vec<usize> = (0..n).filter(|i| !test.contains(i)).collect();
            train.sort_unstable();
            FoldSplit {
                fold_index,
                train,
                test,
            }
        })
        .collect())
}
