//! Shallow noun-phrase chunking over tag sequences.
//!
//! The NP pattern is `(DT|PDT)? (JJ|JJR|JJS)* (NN|NNS|NNP|NNPS)+`,
//! matched maximally left to right. The head is the final noun.

use crate::error::{Error, Result};
use crate::tag::Tag;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PhraseCategory {
    NounPhrase,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Phrase {
    pub category: PhraseCategory,
    pub start: usize,
    pub end: usize,
    pub head: usize,
}

fn is_det(tag: &Tag) -> bool {
    matches!(tag.symbol(), "DT" | "PDT")
}

fn is_adj(tag: &Tag) -> bool {
    matches!(tag.symbol(), "JJ" | "JJR" | "JJS")
}

fn is_noun(tag: &Tag) -> bool {
    matches!(tag.symbol(), "NN" | "NNS" | "NNP" | "NNPS")
}

/// Chunk a tag sequence into maximal noun phrases.
pub fn chunk(tags: &[Tag]) -> Vec<Phrase> {
    let mut phrases = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        let mut j = i;
        if j < tags.len() && is_det(&tags[j]) {
            j += 1;
        }
        while j < tags.len() && is_adj(&tags[j]) {
            j += 1;
        }
        let noun_start = j;
        while j < tags.len() && is_noun(&tags[j]) {
            j += 1;
        }
        if j > noun_start {
            phrases.push(Phrase {
                category: PhraseCategory::NounPhrase,
                start: i,
                end: j,
                head: j - 1,
            });
            i = j;
        } else {
            i += 1;
        }
    }
    phrases
}

/// The unique phrase whose span contains token index `i`, if any.
pub fn phrase_at(phrases: &[Phrase], i: usize) -> Option<&Phrase> {
    phrases.iter().find(|p| p.start <= i && i < p.end)
}

/// The phrase with the smallest start at or after `p.end`. Intervening
/// non-phrase tokens are permitted. Errors if `p` is not in the list.
pub fn next_phrase<'a>(phrases: &'a [Phrase], p: &Phrase) -> Result<Option<&'a Phrase>> {
    if !phrases.contains(p) {
        return Err(Error::PhraseNotFound {
            start: p.start,
            end: p.end,
        });
    }
    Ok(phrases
        .iter()
        .filter(|q| q.start >= p.end)
        .min_by_key(|q| q.start))
}

/// The phrase with the largest end at or before `p.start`.
pub fn prev_phrase<'a>(phrases: &'a [Phrase], p: &Phrase) -> Result<Option<&'a Phrase>> {
    if !phrases.contains(p) {
        return Err(Error::PhraseNotFound {
            start: p.start,
            end: p.end,
        });
    }
    Ok(phrases
        .iter()
        .filter(|q| q.end <= p.start)
        .max_by_key(|q| q.end))
}
