//! The statistical core: an averaged-perceptron sequence tagger with
//! greedy left-to-right decoding, a tag dictionary for unambiguous
//! frequent words, and pre-tagging constraints.

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::resources::{find_concepts, Lexicon, Ontology};
use crate::tag::Tag;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Words kept in the tag dictionary must occur at least this often ...
const DICT_FREQ_THRESHOLD: u64 = 20;
/// ... and carry their majority tag at least this fraction of the time.
const DICT_PURITY_THRESHOLD: f64 = 0.97;

#[derive(Clone, PartialEq, Debug)]
pub struct PerceptronModel {
    pub weights: BTreeMap<String, BTreeMap<Tag, f64>>,
    pub tag_dictionary: BTreeMap<String, Tag>,
    pub tag_set: BTreeSet<Tag>,
    pub format_version: u32,
}

/// Restriction of a token position to a set of allowed tags.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TagConstraint {
    pub index: usize,
    pub allowed: BTreeSet<Tag>,
}

#[derive(Clone, Copy, Debug)]
pub struct TrainConfig {
    pub iterations: u32,
    pub seed: u64,
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig {
            iterations: 5,
            seed: 0,
            shuffle: true,
        }
    }
}

const BOUNDARY: &str = "<s>";
const BOUNDARY_END: &str = "</s>";

/// Deterministic ordered feature list for position `i`.
pub fn extract_features(
    words: &[String],
    i: usize,
    prev_tag: Option<&Tag>,
    prev2_tag: Option<&Tag>,
) -> Vec<String> {
    let word = &words[i];
    let lower = word.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();

    let mut feats = Vec::with_capacity(12);
    feats.push("bias".to_string());
    feats.push(format!("w={lower}"));
    for n in 1..=chars.len().min(3) {
        let suffix: String = chars[chars.len() - n..].iter().collect();
        feats.push(format!("suf{n}={suffix}"));
    }
    if let Some(first) = chars.first() {
        feats.push(format!("pre1={first}"));
    }
    let prev_w = if i > 0 {
        words[i - 1].to_lowercase()
    } else {
        BOUNDARY.to_string()
    };
    feats.push(format!("prev_w={prev_w}"));
    let next_w = if i + 1 < words.len() {
        words[i + 1].to_lowercase()
    } else {
        BOUNDARY_END.to_string()
    };
    feats.push(format!("next_w={next_w}"));
    let p1 = prev_tag.map(Tag::symbol).unwrap_or(BOUNDARY);
    let p2 = prev2_tag.map(Tag::symbol).unwrap_or(BOUNDARY);
    feats.push(format!("prev_t={p1}"));
    feats.push(format!("prev2_t={p2}+{p1}"));
    if word.chars().next().is_some_and(|c| c.is_uppercase()) {
        feats.push("cap=1".to_string());
    }
    if word.chars().any(|c| c.is_ascii_digit()) {
        feats.push("digit=1".to_string());
    }
    if word.contains('-') {
        feats.push("hyp=1".to_string());
    }
    feats
}

fn score_tags(
    weights: &BTreeMap<String, BTreeMap<Tag, f64>>,
    features: &[String],
) -> BTreeMap<Tag, f64> {
    let mut scores: BTreeMap<Tag, f64> = BTreeMap::new();
    for feat in features {
        if let Some(per_tag) = weights.get(feat) {
            for (tag, w) in per_tag {
                *scores.entry(tag.clone()).or_insert(0.0) += w;
            }
        }
    }
    scores
}

/// Argmax over `allowed` (iterated in lexicographic order, strict
/// greater to replace — ties break to the smaller symbol).
fn argmax<'a, I>(scores: &BTreeMap<Tag, f64>, allowed: I) -> Option<Tag>
where
    I: IntoIterator<Item = &'a Tag>,
{
    let mut best: Option<(Tag, f64)> = None;
    for tag in allowed {
        let s = scores.get(tag).copied().unwrap_or(0.0);
        match &best {
            Some((_, bs)) if s <= *bs => {}
            _ => best = Some((tag.clone(), s)),
        }
    }
    best.map(|(t, _)| t)
}

#[derive(Default)]
struct Trainer {
    weights: BTreeMap<String, BTreeMap<Tag, f64>>,
    totals: BTreeMap<(String, Tag), f64>,
    tstamps: BTreeMap<(String, Tag), u64>,
    instances: u64,
}

impl Trainer {
    fn update(&mut self, truth: &Tag, guess: &Tag, features: &[String]) {
        self.instances += 1;
        if truth == guess {
            return;
        }
        for f in features {
            self.bump(f, truth, 1.0);
            self.bump(f, guess, -1.0);
        }
    }

    fn bump(&mut self, feat: &str, tag: &Tag, delta: f64) {
        let key = (feat.to_string(), tag.clone());
        let w = self
            .weights
            .entry(feat.to_string())
            .or_default()
            .entry(tag.clone())
            .or_insert(0.0);
        let stamp = self.tstamps.entry(key.clone()).or_insert(0);
        *self.totals.entry(key).or_insert(0.0) += (self.instances - *stamp) as f64 * *w;
        *stamp = self.instances;
        *w += delta;
    }

    fn averaged(self) -> BTreeMap<String, BTreeMap<Tag, f64>> {
        let mut out: BTreeMap<String, BTreeMap<Tag, f64>> = BTreeMap::new();
        let n = self.instances.max(1) as f64;
        for (feat, per_tag) in &self.weights {
            for (tag, w) in per_tag {
                let key = (feat.clone(), tag.clone());
                let stamp = self.tstamps.get(&key).copied().unwrap_or(0);
                let total = self.totals.get(&key).copied().unwrap_or(0.0)
                    + (self.instances - stamp) as f64 * w;
                let avg = total / n;
                if avg != 0.0 {
                    out.entry(feat.clone()).or_default().insert(tag.clone(), avg);
                }
            }
        }
        out
    }
}

/// Averaged-perceptron training with greedy decoding. Deterministic for
/// a given seed.
pub fn train(corpus: &Corpus, config: &TrainConfig) -> Result<PerceptronModel> {
    if config.iterations == 0 {
        return Err(Error::InvalidConfig("iterations must be >= 1".into()));
    }
    if corpus.sentences.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    for (i, s) in corpus.sentences.iter().enumerate() {
        if !s.is_tagged() {
            return Err(Error::InvalidConfig(format!(
                "training corpus sentence {i} is not fully tagged"
            )));
        }
    }

    let tag_set: BTreeSet<Tag> = corpus
        .sentences
        .iter()
        .flat_map(|s| s.tokens.iter().filter_map(|t| t.tag.clone()))
        .collect();
    let tag_dictionary = build_tag_dictionary(corpus);

    let mut trainer = Trainer::default();
    let mut order: Vec<usize> = (0..corpus.sentences.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    for _ in 0..config.iterations {
        for &si in &order {
            let sentence = &corpus.sentences[si];
            let words = sentence.words();
            let gold = sentence.tags().expect("checked above");
            let mut p1: Option<Tag> = None;
            let mut p2: Option<Tag> = None;
            for i in 0..words.len() {
                let lower = words[i].to_lowercase();
                let guess = match tag_dictionary.get(&lower) {
                    Some(t) => t.clone(),
                    None => {
                        let feats = extract_features(&words, i, p1.as_ref(), p2.as_ref());
                        let scores = score_tags(&trainer.weights, &feats);
                        let g = argmax(&scores, tag_set.iter()).expect("tag set is non-empty");
                        trainer.update(&gold[i], &g, &feats);
                        g
                    }
                };
                p2 = p1;
                p1 = Some(guess);
            }
        }
        if config.shuffle {
            order.shuffle(&mut rng);
        }
    }

    Ok(PerceptronModel {
        weights: trainer.averaged(),
        tag_dictionary,
        tag_set,
        format_version: MODEL_FORMAT_VERSION,
    })
}

fn build_tag_dictionary(corpus: &Corpus) -> BTreeMap<String, Tag> {
    let mut counts: BTreeMap<String, BTreeMap<Tag, u64>> = BTreeMap::new();
    for s in &corpus.sentences {
        for t in &s.tokens {
            if let Some(tag) = &t.tag {
                *counts
                    .entry(t.text.to_lowercase())
                    .or_default()
                    .entry(tag.clone())
                    .or_insert(0) += 1;
            }
        }
    }
    let mut dict = BTreeMap::new();
    for (word, per_tag) in counts {
        let total: u64 = per_tag.values().sum();
        let (mode_tag, mode) = per_tag
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .expect("non-empty");
        if total >= DICT_FREQ_THRESHOLD && *mode as f64 / total as f64 >= DICT_PURITY_THRESHOLD {
            dict.insert(word, mode_tag.clone());
        }
    }
    dict
}

/// Greedy left-to-right decoding. The candidate set at each position is
/// the constraint's allowed set if present, else the tag-dictionary hit,
/// else the full tag set.
pub fn predict(
    model: &PerceptronModel,
    words: &[String],
    constraints: &[TagConstraint],
) -> Vec<Tag> {
    let mut by_index: BTreeMap<usize, &BTreeSet<Tag>> = BTreeMap::new();
    for c in constraints {
        by_index.insert(c.index, &c.allowed);
    }
    let mut out: Vec<Tag> = Vec::with_capacity(words.len());
    let mut p1: Option<Tag> = None;
    let mut p2: Option<Tag> = None;
    for i in 0..words.len() {
        let feats = extract_features(words, i, p1.as_ref(), p2.as_ref());
        let scores = score_tags(&model.weights, &feats);
        let dict_hit = model.tag_dictionary.get(&words[i].to_lowercase());
        let guess = match (by_index.get(&i), dict_hit) {
            (Some(allowed), _) => argmax(&scores, allowed.iter()),
            (None, Some(t)) => Some(t.clone()),
            (None, None) => argmax(&scores, model.tag_set.iter()),
        }
        .expect("candidate set is non-empty");
        p2 = p1;
        p1 = Some(guess.clone());
        out.push(guess);
    }
    out
}

/// Nominal tags an ontology concept token is restricted to.
fn nominal_tags() -> BTreeSet<Tag> {
    ["NN", "NNS", "NNP", "NNPS"]
        .iter()
        .map(|s| Tag::parse(s).unwrap())
        .collect()
}

/// Pre-tagging constraints: singleton constraints for words the lexicon
/// knows with exactly one tag, nominal constraints for tokens inside
/// ontology concept matches. Where both apply the intersection wins
/// when non-empty, otherwise the concept reading wins.
pub fn preprocess_constraints(
    lexicon: &Lexicon,
    ontology: &Ontology,
    words: &[String],
) -> Vec<TagConstraint> {
    use crate::corpus::{Sentence, Token};

    let mut allowed: BTreeMap<usize, BTreeSet<Tag>> = BTreeMap::new();
    for (i, word) in words.iter().enumerate() {
        if let Some(tags) = lexicon.tags_of(word) {
            if tags.len() == 1 {
                allowed.insert(i, tags.clone());
            }
        }
    }
    let sentence = Sentence::new(words.iter().map(|w| Token::new(w.clone(), None)).collect());
    let nominal = nominal_tags();
    for span in find_concepts(ontology, &sentence) {
        for i in span.start..span.end {
            let merged = match allowed.get(&i) {
                Some(existing) => {
                    let inter: BTreeSet<Tag> =
                        existing.intersection(&nominal).cloned().collect();
                    if inter.is_empty() {
                        nominal.clone()
                    } else {
                        inter
                    }
                }
                None => nominal.clone(),
            };
            allowed.insert(i, merged);
        }
    }
    allowed
        .into_iter()
        .map(|(index, allowed)| TagConstraint { index, allowed })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    tag_set: Vec<String>,
    tag_dictionary: BTreeMap<String, String>,
    weights: BTreeMap<String, BTreeMap<String, f64>>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

/// Canonical JSON serialization (keys sorted, stable bytes).
pub fn save_model(model: &PerceptronModel) -> Vec<u8> {
    let file = ModelFile {
        format_version: model.format_version,
        tag_set: model.tag_set.iter().map(|t| t.symbol().to_string()).collect(),
        tag_dictionary: model
            .tag_dictionary
            .iter()
            .map(|(w, t)| (w.clone(), t.symbol().to_string()))
            .collect(),
        weights: model
            .weights
            .iter()
            .map(|(f, per_tag)| {
                (
                    f.clone(),
                    per_tag
                        .iter()
                        .map(|(t, w)| (t.symbol().to_string(), *w))
                        .collect(),
                )
            })
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&file).expect("model serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

pub fn load_model(bytes: &[u8]) -> Result<PerceptronModel> {
    let probe: VersionProbe = serde_json::from_slice(bytes)
        .map_err(|e| Error::ModelCorrupt(e.to_string()))?;
    if probe.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::ModelVersion {
            found: probe.format_version,
            supported: MODEL_FORMAT_VERSION,
        });
    }
    let file: ModelFile =
        serde_json::from_slice(bytes).map_err(|e| Error::ModelCorrupt(e.to_string()))?;
    let parse_tag =
        |s: &str| Tag::parse_with(s, true).map_err(|e| Error::ModelCorrupt(e.to_string()));

    let mut tag_set = BTreeSet::new();
    for s in &file.tag_set {
        tag_set.insert(parse_tag(s)?);
    }
    let mut tag_dictionary = BTreeMap::new();
    for (w, t) in &file.tag_dictionary {
        tag_dictionary.insert(w.clone(), parse_tag(t)?);
    }
    let mut weights: BTreeMap<String, BTreeMap<Tag, f64>> = BTreeMap::new();
    for (f, per_tag) in &file.weights {
        let mut inner = BTreeMap::new();
        for (t, w) in per_tag {
            inner.insert(parse_tag(t)?, *w);
        }
        weights.insert(f.clone(), inner);
    }
    Ok(PerceptronModel {
        weights,
        tag_dictionary,
        tag_set,
        format_version: file.format_version,
    })
}
