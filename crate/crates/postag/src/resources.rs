//! Knowledge resources consulted by rule conditions: a POS lexicon,
//! a named-entity gazetteer and a domain-concept ontology.
//!
//! All lookups are case-insensitive. Gazetteer and ontology matching is
//! leftmost-greedy maximal over token sequences.

use crate::corpus::{Corpus, Sentence};
use crate::error::{Error, Result};
use crate::tag::Tag;
use std::collections::{BTreeMap, BTreeSet};

/// A token span `[start, end)` with a label (the matched entry).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, BTreeSet<Tag>>,
}

impl Lexicon {
    pub fn insert(&mut self, word: &str, tag: Tag) {
        self.entries
            .entry(word.to_lowercase())
            .or_default()
            .insert(tag);
    }

    pub fn tags_of(&self, word: &str) -> Option<&BTreeSet<Tag>> {
        self.entries.get(&word.to_lowercase())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `word<TAB>TAG[,TAG...]` lines; `#` comments and blanks ignored.
    pub fn parse(text: &str) -> Result<Lexicon> {
        let mut lex = Lexicon::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let Some((word, tags)) = line.split_once('\t') else {
                return Err(Error::Parse {
                    line: lineno + 1,
                    col: 1,
                    msg: format!("expected `word<TAB>TAG[,TAG...]`, got `{line}`"),
                });
            };
            if word.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    col: 1,
                    msg: "empty word field".into(),
                });
            }
            for sym in tags.split(',') {
                let tag = Tag::parse(sym.trim()).map_err(|e| Error::Parse {
                    line: lineno + 1,
                    col: word.chars().count() + 2,
                    msg: e.to_string(),
                })?;
                lex.insert(word, tag);
            }
        }
        Ok(lex)
    }
}

/// Observed (word, tag) pairs of a fully tagged corpus, case-folded.
pub fn build_lexicon(corpus: &Corpus) -> Lexicon {
    let mut lex = Lexicon::default();
    for sentence in &corpus.sentences {
        for token in &sentence.tokens {
            if let Some(tag) = &token.tag {
                lex.insert(&token.text, tag.clone());
            }
        }
    }
    lex
}

/// Naive lemma: strip a single trailing `s`, if any.
fn naive_lemma(word: &str) -> Option<String> {
    let lower = word.to_lowercase();
    lower.strip_suffix('s').map(|s| s.to_string())
}

/// True iff the union of tag sets for the word and its naive lemma has
/// at least two distinct members and contains `required_tag`.
pub fn is_polysemous(lexicon: &Lexicon, word: &str, required_tag: &Tag) -> bool {
    let mut union: BTreeSet<&Tag> = BTreeSet::new();
    if let Some(tags) = lexicon.tags_of(word) {
        union.extend(tags.iter());
    }
    if let Some(lemma) = naive_lemma(word) {
        if !lemma.is_empty() {
            if let Some(tags) = lexicon.tags_of(&lemma) {
                union.extend(tags.iter());
            }
        }
    }
    union.len() >= 2 && union.contains(required_tag)
}

/// A set of lowercased multi-word token sequences.
#[derive(Clone, Debug, Default)]
pub struct PhraseList {
    entries: BTreeSet<Vec<String>>,
    max_len: usize,
}

impl PhraseList {
    pub fn insert(&mut self, entry: &str) -> bool {
        let toks: Vec<String> = entry
            .split_whitespace()
            .map(|t| t.to_lowercase())
            .collect();
        if toks.is_empty() {
            return false;
        }
        self.max_len = self.max_len.max(toks.len());
        self.entries.insert(toks)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// One entry per line; `#` comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<PhraseList> {
        let mut list = PhraseList::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            list.insert(line);
        }
        Ok(list)
    }

    /// Leftmost-greedy maximal non-overlapping matches against the
    /// sentence's tokens, case-insensitive.
    pub fn find(&self, sentence: &Sentence) -> Vec<Span> {
        let words: Vec<String> = sentence
            .tokens
            .iter()
            .map(|t| t.text.to_lowercase())
            .collect();
        let mut spans = Vec::new();
        let mut i = 0;
        while i < words.len() {
            let longest = (1..=self.max_len.min(words.len() - i))
                .rev()
                .find(|&n| self.entries.contains(&words[i..i + n]));
            match longest {
                Some(n) => {
                    spans.push(Span {
                        start: i,
                        end: i + n,
                        label: words[i..i + n].join(" "),
                    });
                    i += n;
                }
                None => i += 1,
            }
        }
        spans
    }
}

pub type Gazetteer = PhraseList;
pub type Ontology = PhraseList;

pub fn find_entities(gazetteer: &Gazetteer, sentence: &Sentence) -> Vec<Span> {
    gazetteer.find(sentence)
}

pub fn find_concepts(ontology: &Ontology, sentence: &Sentence) -> Vec<Span> {
    ontology.find(sentence)
}

/// Everything the rule conditions may consult, bundled.
#[derive(Clone, Debug, Default)]
pub struct Resources {
    pub lexicon: Lexicon,
    pub gazetteer: Gazetteer,
    pub ontology: Ontology,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_plain, parse_slash, ParseOptions};
    use crate::tag::tag;

    fn mini_lexicon() -> Lexicon {
        let mut lex = Lexicon::default();
        lex.insert("post", tag("NN"));
        lex.insert("post", tag("VB"));
        lex.insert("posts", tag("NNS"));
        lex.insert("posts", tag("VBZ"));
        lex
    }

    #[test]
    fn build_lexicon_unions_tags() {
        let c = parse_slash("posts/NNS\nposts/VBZ\n", ParseOptions::default()).unwrap();
        let lex = build_lexicon(&c);
        let tags = lex.tags_of("posts").unwrap();
        assert_eq!(tags.len(), 2);
        assert!(tags.contains(&tag("NNS")) && tags.contains(&tag("VBZ")));
    }

    #[test]
    fn build_lexicon_case_folds() {
        let c = parse_slash("Dog/NN dog/NN\n", ParseOptions::default()).unwrap();
        let lex = build_lexicon(&c);
        assert_eq!(lex.len(), 1);
        assert_eq!(lex.tags_of("DOG").unwrap().len(), 1);
    }

    #[test]
    fn build_lexicon_empty_corpus() {
        assert!(build_lexicon(&Corpus::default()).is_empty());
    }

    #[test]
    fn polysemy_via_lemma() {
        let lex = mini_lexicon();
        // "posts" itself never carries VB, but its lemma "post" does
        assert!(is_polysemous(&lex, "posts", &tag("VB")));
        assert!(is_polysemous(&lex, "post", &tag("NN")));
        assert!(!is_polysemous(&lex, "missing", &tag("NN")));
    }

    #[test]
    fn polysemy_requires_two_tags() {
        let mut lex = Lexicon::default();
        lex.insert("the", tag("DT"));
        assert!(!is_polysemous(&lex, "the", &tag("DT")));
    }

    #[test]
    fn gazetteer_finds_entity() {
        let mut gaz = Gazetteer::default();
        gaz.insert("wall street");
        let s = &parse_plain("Wall Street posts sharp gains").sentences[0];
        let spans = find_entities(&gaz, s);
        assert_eq!(spans.len(), 1);
        assert_eq!((spans[0].start, spans[0].end), (0, 2));
    }

    #[test]
    fn gazetteer_empty() {
        let gaz = Gazetteer::default();
        let s = &parse_plain("Wall Street").sentences[0];
        assert!(find_entities(&gaz, s).is_empty());
    }

    #[test]
    fn leftmost_greedy_on_overlap() {
        let mut gaz = Gazetteer::default();
        gaz.insert("new york");
        gaz.insert("york city");
        let s = &parse_plain("new york city").sentences[0];
        let spans = find_entities(&gaz, s);
        assert_eq!(spans.len(), 1);
        assert_eq!((spans[0].start, spans[0].end), (0, 2));
    }

    #[test]
    fn concepts_at_sentence_end() {
        let mut ont = Ontology::default();
        ont.insert("new home sales");
        ont.insert("existing home sales");
        let s = &parse_plain(
            "New home sales jumps in the third quarter and exceeds existing home sales",
        )
        .sentences[0];
        let spans = find_concepts(&ont, s);
        assert_eq!(spans.len(), 2);
        assert_eq!((spans[0].start, spans[0].end), (0, 3));
        assert_eq!((spans[1].start, spans[1].end), (10, 13));
        assert_eq!(spans[1].end, 13);
    }

    #[test]
    fn spans_sorted_non_overlapping() {
        let mut gaz = Gazetteer::default();
        gaz.insert("a b");
        gaz.insert("b c");
        let s = &parse_plain("a b c a b").sentences[0];
        let spans = find_entities(&gaz, s);
        for pair in spans.windows(2) {
            assert!(pair[0].end <= pair[1].start);
        }
    }

    #[test]
    fn lexicon_file_parsing() {
        let lex = Lexicon::parse("# comment\npost\tNN,VB\nposts\tNNS,VBZ\n").unwrap();
        assert_eq!(lex.tags_of("post").unwrap().len(), 2);
        assert!(Lexicon::parse("post NN\n").is_err());
        assert!(Lexicon::parse("post\tBOGUS\n").is_err());
    }
}
