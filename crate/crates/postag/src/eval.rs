//! Token- and sentence-level evaluation: accuracies, relaxed matching,
//! critical/non-critical error classification, per-tag precision and
//! recall, confusion ranking, rule-application Pareto statistics, the
//! worst-case sentence-corruption bound, and k-fold cross-validation.

use crate::corpus::{kfold_split, Corpus};
use crate::error::{Error, Result};
use crate::perceptron::{train, TrainConfig};
use crate::pipeline::Pipeline;
use crate::resources::Resources;
use crate::rules::{EngineConfig, RuleSet, RuleTrace};
use crate::tag::{Tag, PUNCT_TAGS};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// A symmetric tag pair counted as a match during evaluation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelaxationRule {
    pub a: Tag,
    pub b: Tag,
}

impl RelaxationRule {
    pub fn new(a: Tag, b: Tag) -> Result<RelaxationRule> {
        if a == b {
            return Err(Error::InvalidConfig(format!(
                "relaxation pair must be two distinct tags, got {a} <-> {b}"
            )));
        }
        Ok(RelaxationRule { a, b })
    }

    fn matches(&self, x: &Tag, y: &Tag) -> bool {
        (self.a == *x && self.b == *y) || (self.a == *y && self.b == *x)
    }
}

/// The three shipped relaxation pairs.
pub fn default_relaxations() -> Vec<RelaxationRule> {
    [("TO", "IN"), ("WP", "WDT"), ("PDT", "DT")]
        .iter()
        .map(|(a, b)| {
            RelaxationRule::new(Tag::parse(a).unwrap(), Tag::parse(b).unwrap()).unwrap()
        })
        .collect()
}

/// Parse a relaxation file: one `TAG <-> TAG` pair per line, `#`
/// comments ignored.
pub fn parse_relaxations(text: &str) -> Result<Vec<RelaxationRule>> {
    let mut rules = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split("<->").map(str::trim).collect();
        let pos_err = |msg: String| Error::Parse {
            line: lineno + 1,
            col: 1,
            msg,
        };
        if parts.len() != 2 {
            return Err(pos_err(format!("expected `TAG <-> TAG`, got `{line}`")));
        }
        let a = Tag::parse(parts[0]).map_err(|e| pos_err(e.to_string()))?;
        let b = Tag::parse(parts[1]).map_err(|e| pos_err(e.to_string()))?;
        rules.push(RelaxationRule::new(a, b).map_err(|e| pos_err(e.to_string()))?);
    }
    Ok(rules)
}

/// `pred == gold`, or the pair is sanctioned by some relaxation rule.
pub fn relaxed_match(pred: &Tag, gold: &Tag, rules: &[RelaxationRule]) -> bool {
    pred == gold || rules.iter().any(|r| r.matches(pred, gold))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum CoarseClass {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Conj,
    Num,
    Prt,
    Punct,
    Other,
}

impl CoarseClass {
    pub fn parse(name: &str) -> Option<CoarseClass> {
        Some(match name.to_uppercase().as_str() {
            "NOUN" => CoarseClass::Noun,
            "VERB" => CoarseClass::Verb,
            "ADJ" => CoarseClass::Adj,
            "ADV" => CoarseClass::Adv,
            "PRON" => CoarseClass::Pron,
            "DET" => CoarseClass::Det,
            "ADP" => CoarseClass::Adp,
            "CONJ" => CoarseClass::Conj,
            "NUM" => CoarseClass::Num,
            "PRT" => CoarseClass::Prt,
            "PUNCT" => CoarseClass::Punct,
            "OTHER" => CoarseClass::Other,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ErrorClass {
    Critical,
    NonCritical,
}

/// Tag → coarse class mapping plus sanctioned non-critical exception
/// pairs; total over the tag set (unlisted tags fall back to OTHER).
#[derive(Clone, Debug)]
pub struct CoarseClassMap {
    classes: BTreeMap<Tag, CoarseClass>,
    exceptions: BTreeSet<(Tag, Tag)>,
}

fn ordered_pair(a: Tag, b: Tag) -> (Tag, Tag) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Default for CoarseClassMap {
    fn default() -> CoarseClassMap {
        let groups: [(&[&str], CoarseClass); 11] = [
            (&["NN", "NNS", "NNP", "NNPS"], CoarseClass::Noun),
            (
                &["VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD"],
                CoarseClass::Verb,
            ),
            (&["JJ", "JJR", "JJS"], CoarseClass::Adj),
            (&["RB", "RBR", "RBS", "WRB"], CoarseClass::Adv),
            (&["PRP", "PRP$", "WP", "WP$"], CoarseClass::Pron),
            (&["DT", "PDT", "WDT"], CoarseClass::Det),
            (&["IN", "TO"], CoarseClass::Adp),
            (&["CC"], CoarseClass::Conj),
            (&["CD"], CoarseClass::Num),
            (&["RP", "POS"], CoarseClass::Prt),
            (&["EX", "FW", "LS", "SYM", "UH"], CoarseClass::Other),
        ];
        let mut classes = BTreeMap::new();
        for (symbols, class) in groups {
            for s in symbols {
                classes.insert(Tag::parse(s).unwrap(), class);
            }
        }
        for s in PUNCT_TAGS {
            classes.insert(Tag::parse(s).unwrap(), CoarseClass::Punct);
        }
        let exceptions = [("JJ", "NN"), ("JJ", "NNS"), ("POS", "VB"), ("POS", "VBZ")]
            .iter()
            .map(|(a, b)| ordered_pair(Tag::parse(a).unwrap(), Tag::parse(b).unwrap()))
            .collect();
        CoarseClassMap {
            classes,
            exceptions,
        }
    }
}

impl CoarseClassMap {
    pub fn class_of(&self, tag: &Tag) -> CoarseClass {
        self.classes.get(tag).copied().unwrap_or(CoarseClass::Other)
    }

    /// Parse an override file: `TAG<TAB>CLASS` lines plus
    /// `except TAG <-> TAG` lines; starts from the default map.
    pub fn parse(text: &str) -> Result<CoarseClassMap> {
        let mut map = CoarseClassMap::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let pos_err = |msg: String| Error::Parse {
                line: lineno + 1,
                col: 1,
                msg,
            };
            if let Some(rest) = line.strip_prefix("except ") {
                let parts: Vec<&str> = rest.split("<->").map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(pos_err(format!("expected `except TAG <-> TAG`, got `{line}`")));
                }
                let a = Tag::parse(parts[0]).map_err(|e| pos_err(e.to_string()))?;
                let b = Tag::parse(parts[1]).map_err(|e| pos_err(e.to_string()))?;
                map.exceptions.insert(ordered_pair(a, b));
            } else {
                let Some((tag, class)) = line.split_once('\t') else {
                    return Err(pos_err(format!("expected `TAG<TAB>CLASS`, got `{line}`")));
                };
                let tag = Tag::parse(tag.trim()).map_err(|e| pos_err(e.to_string()))?;
                let class = CoarseClass::parse(class.trim())
                    .ok_or_else(|| pos_err(format!("unknown coarse class `{class}`")))?;
                map.classes.insert(tag, class);
            }
        }
        Ok(map)
    }
}

/// Non-critical if the tags share a coarse class or the pair is a
/// sanctioned exception; critical otherwise. `pred == gold` is an error.
pub fn classify_error(pred: &Tag, gold: &Tag, map: &CoarseClassMap) -> Result<ErrorClass> {
    if pred == gold {
        return Err(Error::InvalidConfig(format!(
            "classify_error called on a non-error ({pred} == {gold})"
        )));
    }
    let same_class = map.class_of(pred) == map.class_of(gold);
    let excepted = map
        .exceptions
        .contains(&ordered_pair(pred.clone(), gold.clone()));
    Ok(if same_class || excepted {
        ErrorClass::NonCritical
    } else {
        ErrorClass::Critical
    })
}

fn check_shapes(gold: &Corpus, pred: &Corpus) -> Result<()> {
    if gold.sentences.len() != pred.sentences.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} gold sentences vs {} predicted",
            gold.sentences.len(),
            pred.sentences.len()
        )));
    }
    for (i, (g, p)) in gold.sentences.iter().zip(&pred.sentences).enumerate() {
        if g.len() != p.len() {
            return Err(Error::ShapeMismatch(format!(
                "sentence {i}: {} gold tokens vs {} predicted",
                g.len(),
                p.len()
            )));
        }
        if !g.is_tagged() || !p.is_tagged() {
            return Err(Error::ShapeMismatch(format!(
                "sentence {i} is not fully tagged"
            )));
        }
    }
    Ok(())
}

/// Fraction of tokens whose predicted tag equals gold.
pub fn token_accuracy(gold: &Corpus, pred: &Corpus) -> Result<f64> {
    check_shapes(gold, pred)?;
    let total = gold.token_count();
    if total == 0 {
        return Ok(1.0);
    }
    let correct: usize = gold
        .sentences
        .iter()
        .zip(&pred.sentences)
        .map(|(g, p)| {
            g.tokens
                .iter()
                .zip(&p.tokens)
                .filter(|(gt, pt)| gt.tag == pt.tag)
                .count()
        })
        .sum();
    Ok(correct as f64 / total as f64)
}

/// Fraction of sentences with every token tagged correctly.
pub fn sentence_accuracy(gold: &Corpus, pred: &Corpus) -> Result<f64> {
    check_shapes(gold, pred)?;
    let total = gold.sentences.len();
    if total == 0 {
        return Ok(1.0);
    }
    let correct = gold
        .sentences
        .iter()
        .zip(&pred.sentences)
        .filter(|(g, p)| g.tokens.iter().zip(&p.tokens).all(|(gt, pt)| gt.tag == pt.tag))
        .count();
    Ok(correct as f64 / total as f64)
}

/// Counts of (gold, predicted) tag pairs; the diagonal holds correct
/// tokens.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ConfusionMatrix {
    pub counts: BTreeMap<(Tag, Tag), u64>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn diagonal(&self) -> u64 {
        self.counts
            .iter()
            .filter(|((g, p), _)| g == p)
            .map(|(_, c)| c)
            .sum()
    }
}

impl Serialize for ConfusionMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut nested: BTreeMap<&str, BTreeMap<&str, u64>> = BTreeMap::new();
        for ((gold, pred), count) in &self.counts {
            nested
                .entry(gold.symbol())
                .or_default()
                .insert(pred.symbol(), *count);
        }
        nested.serialize(s)
    }
}

pub fn confusion_matrix(gold: &Corpus, pred: &Corpus) -> Result<ConfusionMatrix> {
    check_shapes(gold, pred)?;
    let mut m = ConfusionMatrix::default();
    for (g, p) in gold.sentences.iter().zip(&pred.sentences) {
        for (gt, pt) in g.tokens.iter().zip(&p.tokens) {
            let key = (gt.tag.clone().unwrap(), pt.tag.clone().unwrap());
            *m.counts.entry(key).or_insert(0) += 1;
        }
    }
    Ok(m)
}

/// Off-diagonal cells sorted descending by count, ties lexicographic on
/// the (gold, predicted) pair.
pub fn rank_confusions(m: &ConfusionMatrix, top_n: usize) -> Vec<((Tag, Tag), u64)> {
    let mut off_diag: Vec<((Tag, Tag), u64)> = m
        .counts
        .iter()
        .filter(|((g, p), _)| g != p)
        .map(|(k, c)| (k.clone(), *c))
        .collect();
    off_diag.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    off_diag.truncate(top_n);
    off_diag
}

#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize)]
pub struct TagPrf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct EvalReport {
    pub token_accuracy: f64,
    pub sentence_accuracy: f64,
    pub relaxed_token_accuracy: f64,
    pub relaxed_sentence_accuracy: f64,
    pub critical_errors: u64,
    pub non_critical_errors: u64,
    pub per_tag: BTreeMap<Tag, TagPrf>,
    pub confusion: ConfusionMatrix,
}

/// Full evaluation of a prediction against gold.
pub fn evaluate(
    gold: &Corpus,
    pred: &Corpus,
    relaxations: &[RelaxationRule],
    map: &CoarseClassMap,
) -> Result<EvalReport> {
    check_shapes(gold, pred)?;
    let confusion = confusion_matrix(gold, pred)?;

    let total_tokens = gold.token_count();
    let total_sentences = gold.sentences.len();
    let mut relaxed_tokens = 0u64;
    let mut relaxed_sentences = 0u64;
    let mut critical = 0u64;
    let mut non_critical = 0u64;
    for (g, p) in gold.sentences.iter().zip(&pred.sentences) {
        let mut sentence_relaxed = true;
        for (gt, pt) in g.tokens.iter().zip(&p.tokens) {
            let gtag = gt.tag.as_ref().unwrap();
            let ptag = pt.tag.as_ref().unwrap();
            if relaxed_match(ptag, gtag, relaxations) {
                relaxed_tokens += 1;
            } else {
                sentence_relaxed = false;
            }
            if gtag != ptag {
                match classify_error(ptag, gtag, map)? {
                    ErrorClass::Critical => critical += 1,
                    ErrorClass::NonCritical => non_critical += 1,
                }
            }
        }
        if sentence_relaxed {
            relaxed_sentences += 1;
        }
    }

    let mut gold_totals: BTreeMap<Tag, u64> = BTreeMap::new();
    let mut pred_totals: BTreeMap<Tag, u64> = BTreeMap::new();
    let mut diag: BTreeMap<Tag, u64> = BTreeMap::new();
    for ((g, p), c) in &confusion.counts {
        *gold_totals.entry(g.clone()).or_insert(0) += c;
        *pred_totals.entry(p.clone()).or_insert(0) += c;
        if g == p {
            *diag.entry(g.clone()).or_insert(0) += c;
        }
    }
    let mut per_tag = BTreeMap::new();
    let all_tags: BTreeSet<Tag> = gold_totals.keys().chain(pred_totals.keys()).cloned().collect();
    for tag in all_tags {
        let tp = diag.get(&tag).copied().unwrap_or(0) as f64;
        let pred_n = pred_totals.get(&tag).copied().unwrap_or(0) as f64;
        let gold_n = gold_totals.get(&tag).copied().unwrap_or(0) as f64;
        let precision = if pred_n > 0.0 { tp / pred_n } else { 0.0 };
        let recall = if gold_n > 0.0 { tp / gold_n } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_tag.insert(
            tag,
            TagPrf {
                precision,
                recall,
                f1,
            },
        );
    }

    Ok(EvalReport {
        token_accuracy: token_accuracy(gold, pred)?,
        sentence_accuracy: sentence_accuracy(gold, pred)?,
        relaxed_token_accuracy: if total_tokens == 0 {
            1.0
        } else {
            relaxed_tokens as f64 / total_tokens as f64
        },
        relaxed_sentence_accuracy: if total_sentences == 0 {
            1.0
        } else {
            relaxed_sentences as f64 / total_sentences as f64
        },
        critical_errors: critical,
        non_critical_errors: non_critical,
        per_tag,
        confusion,
    })
}

/// Canonical JSON rendering of a report (keys sorted).
pub fn report_to_json(report: &EvalReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    s.push('\n');
    s
}

/// Per-rule application counts and the share of applications owned by
/// the top 20% of rules.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ParetoStats {
    pub counts: BTreeMap<String, u64>,
    pub top_20pct_share: f64,
}

pub fn pareto_stats(traces: &[RuleTrace]) -> ParetoStats {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for trace in traces {
        for entry in &trace.entries {
            *counts.entry(entry.rule.clone()).or_insert(0) += 1;
        }
    }
    let total: u64 = counts.values().sum();
    let share = if total == 0 {
        0.0
    } else {
        let rules = counts.len();
        let top_k = ((0.2 * rules as f64).ceil() as usize).max(1);
        let mut sorted: Vec<u64> = counts.values().copied().collect();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let top: u64 = sorted.iter().take(top_k).sum();
        top as f64 / total as f64
    };
    ParetoStats {
        counts,
        top_20pct_share: share,
    }
}

/// The each-error-in-a-distinct-sentence worst case: the fraction of
/// sentences that could lose their semantics to critical tag errors.
pub fn worst_case_sentence_error(
    total_tokens: u64,
    avg_sentence_len: u64,
    token_acc: f64,
    critical_fraction: f64,
) -> Result<f64> {
    if avg_sentence_len < 1 {
        return Err(Error::InvalidConfig(
            "average sentence length must be >= 1".into(),
        ));
    }
    for (name, v) in [("token accuracy", token_acc), ("critical fraction", critical_fraction)] {
        if !(0.0..=1.0).contains(&v) || v.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "{name} must be a fraction in [0, 1], got {v}"
            )));
        }
    }
    if total_tokens == 0 {
        return Ok(0.0);
    }
    let bad_tokens = total_tokens as f64 * (1.0 - token_acc) * critical_fraction;
    let sentences = total_tokens as f64 / avg_sentence_len as f64;
    Ok((bad_tokens / sentences).min(1.0))
}

/// Aggregate accuracy statistics across folds.
#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize)]
pub struct AccuracySummary {
    pub token_accuracy: f64,
    pub sentence_accuracy: f64,
    pub relaxed_token_accuracy: f64,
    pub relaxed_sentence_accuracy: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CrossValReport {
    pub folds: Vec<EvalReport>,
    pub mean: AccuracySummary,
    pub variance: AccuracySummary,
}

pub struct CrossValOptions<'a> {
    pub k: usize,
    pub seed: u64,
    pub train: TrainConfig,
    pub resources: Option<&'a Resources>,
    pub rules: Option<&'a RuleSet>,
    pub engine: EngineConfig,
    pub relaxations: Vec<RelaxationRule>,
    pub classes: CoarseClassMap,
}

/// Train on each fold's train split, tag its test split (optionally
/// rule-corrected), evaluate, and aggregate mean and population
/// variance of the accuracies.
pub fn crossvalidate(corpus: &Corpus, opts: &CrossValOptions<'_>) -> Result<CrossValReport> {
    let folds = kfold_split(corpus, opts.k, opts.seed)?;
    let mut reports = Vec::with_capacity(folds.len());
    for fold in &folds {
        let train_corpus = Corpus::new(
            fold.train
                .iter()
                .map(|&i| corpus.sentences[i].clone())
                .collect(),
            format!("{}-fold{}-train", corpus.source_name, fold.fold_index),
        );
        let test_gold = Corpus::new(
            fold.test
                .iter()
                .map(|&i| corpus.sentences[i].clone())
                .collect(),
            format!("{}-fold{}-test", corpus.source_name, fold.fold_index),
        );
        let model = train(&train_corpus, &opts.train)?;
        let pipeline = Pipeline {
            model: &model,
            resources: opts.resources,
            rules: opts.rules,
            engine: opts.engine,
        };
        let (pred, _) = pipeline.tag_corpus(&test_gold);
        reports.push(evaluate(&test_gold, &pred, &opts.relaxations, &opts.classes)?);
    }

    let n = reports.len() as f64;
    let pick = |f: &dyn Fn(&EvalReport) -> f64| {
        let mean = reports.iter().map(f).sum::<f64>() / n;
        let var = reports.iter().map(|r| (f(r) - mean).powi(2)).sum::<f64>() / n;
        (mean, var)
    };
    let (mt, vt) = pick(&|r: &EvalReport| r.token_accuracy);
    let (ms, vs) = pick(&|r: &EvalReport| r.sentence_accuracy);
    let (mrt, vrt) = pick(&|r: &EvalReport| r.relaxed_token_accuracy);
    let (mrs, vrs) = pick(&|r: &EvalReport| r.relaxed_sentence_accuracy);
    Ok(CrossValReport {
        folds: reports,
        mean: AccuracySummary {
            token_accuracy: mt,
            sentence_accuracy: ms,
            relaxed_token_accuracy: mrt,
            relaxed_sentence_accuracy: mrs,
        },
        variance: AccuracySummary {
            token_accuracy: vt,
            sentence_accuracy: vs,
            relaxed_token_accuracy: vrt,
            relaxed_sentence_accuracy: vrs,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_slash, ParseOptions};
    use crate::tag::tag;

    fn corpus(text: &str) -> Corpus {
        parse_slash(text, ParseOptions::default()).unwrap()
    }

    #[test]
    fn token_accuracy_arithmetic() {
        let gold = corpus("dog/NN runs/VBZ");
        let pred = corpus("dog/NN runs/NNS");
        assert_eq!(token_accuracy(&gold, &pred).unwrap(), 0.5);
        assert_eq!(token_accuracy(&gold, &gold).unwrap(), 1.0);
        assert_eq!(sentence_accuracy(&gold, &pred).unwrap(), 0.0);
        assert_eq!(sentence_accuracy(&gold, &gold).unwrap(), 1.0);
    }

    #[test]
    fn shape_mismatch_detected() {
        let gold = corpus("dog/NN runs/VBZ");
        let pred = corpus("dog/NN");
        assert!(matches!(
            token_accuracy(&gold, &pred),
            Err(Error::ShapeMismatch(_))
        ));
        let pred = corpus("dog/NN runs/VBZ\nagain/RB");
        assert!(matches!(
            sentence_accuracy(&gold, &pred),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn relaxed_match_semantics() {
        let rules = default_relaxations();
        assert!(relaxed_match(&tag("TO"), &tag("IN"), &rules));
        assert!(relaxed_match(&tag("IN"), &tag("TO"), &rules));
        assert!(relaxed_match(&tag("NN"), &tag("NN"), &[]));
        assert!(!relaxed_match(&tag("NN"), &tag("VBZ"), &rules));
    }

    #[test]
    fn classify_error_taxonomy() {
        let map = CoarseClassMap::default();
        assert_eq!(
            classify_error(&tag("VBZ"), &tag("NNS"), &map).unwrap(),
            ErrorClass::Critical
        );
        assert_eq!(
            classify_error(&tag("NN"), &tag("NNP"), &map).unwrap(),
            ErrorClass::NonCritical
        );
        assert_eq!(
            classify_error(&tag("VBG"), &tag("JJ"), &map).unwrap(),
            ErrorClass::Critical
        );
        assert_eq!(
            classify_error(&tag("JJ"), &tag("NN"), &map).unwrap(),
            ErrorClass::NonCritical
        );
        assert_eq!(
            classify_error(&tag("VB"), &tag("POS"), &map).unwrap(),
            ErrorClass::NonCritical
        );
        assert!(classify_error(&tag("NN"), &tag("NN"), &map).is_err());
    }

    #[test]
    fn evaluate_identical_corpora() {
        let gold = corpus("the/DT dog/NN runs/VBZ\nit/PRP sleeps/VBZ");
        let r = evaluate(&gold, &gold, &default_relaxations(), &CoarseClassMap::default())
            .unwrap();
        assert_eq!(r.token_accuracy, 1.0);
        assert_eq!(r.sentence_accuracy, 1.0);
        assert_eq!(r.relaxed_token_accuracy, 1.0);
        assert_eq!(r.critical_errors + r.non_critical_errors, 0);
        assert_eq!(r.confusion.diagonal(), r.confusion.total());
        for prf in r.per_tag.values() {
            assert_eq!(prf.f1, 1.0);
        }
    }

    #[test]
    fn evaluate_counts_error_classes() {
        let gold = corpus("gains/NNS to/TO go/VB");
        let pred = corpus("gains/VBZ in/IN go/VB");
        let r = evaluate(&gold, &pred, &default_relaxations(), &CoarseClassMap::default())
            .unwrap();
        assert_eq!(r.critical_errors, 1); // NNS -> VBZ
        assert_eq!(r.non_critical_errors, 1); // TO -> IN (same ADP class)
        // relaxation forgives TO/IN but not NNS/VBZ
        assert!(r.relaxed_token_accuracy > r.token_accuracy);
        assert_eq!(r.relaxed_token_accuracy, 2.0 / 3.0);
    }

    #[test]
    fn confusion_ranking() {
        let mut m = ConfusionMatrix::default();
        m.counts.insert((tag("NN"), tag("JJ")), 10);
        m.counts.insert((tag("IN"), tag("TO")), 5);
        m.counts.insert((tag("DT"), tag("PDT")), 1);
        m.counts.insert((tag("NN"), tag("NN")), 99);
        let top = rank_confusions(&m, 2);
        assert_eq!(
            top,
            vec![((tag("NN"), tag("JJ")), 10), ((tag("IN"), tag("TO")), 5)]
        );
        let all = rank_confusions(&m, usize::MAX);
        let off_diag_sum: u64 = all.iter().map(|(_, c)| c).sum();
        assert_eq!(off_diag_sum, 16);
    }

    #[test]
    fn confusion_perfect_predictions_empty_ranking() {
        let gold = corpus("the/DT dog/NN");
        let m = confusion_matrix(&gold, &gold).unwrap();
        assert!(rank_confusions(&m, 10).is_empty());
        assert_eq!(m.total(), 2);
    }

    #[test]
    fn pareto_share() {
        use crate::rules::{RuleTrace, Termination, TraceEntry};
        let entry = |rule: &str| TraceEntry {
            pass: 1,
            rule: rule.to_string(),
            anchor: 0,
            before: vec![],
            after: vec![],
        };
        let trace = |rules: &[&str]| RuleTrace {
            entries: rules.iter().map(|r| entry(r)).collect(),
            terminated_by: Termination::Quiescent,
        };

        let empty = pareto_stats(&[]);
        assert!(empty.counts.is_empty());
        assert_eq!(empty.top_20pct_share, 0.0);

        let single = pareto_stats(&[trace(&["a", "a", "a", "a", "a"])]);
        assert_eq!(single.counts["a"], 5);
        assert_eq!(single.top_20pct_share, 1.0);

        // 5 rules, top one (ceil(0.2*5)=1) owns 8 of 12 applications
        let mixed = pareto_stats(&[trace(&["a"; 8]), trace(&["b", "c", "d", "e"])]);
        assert_eq!(mixed.counts.len(), 5);
        assert!((mixed.top_20pct_share - 8.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn worst_case_bound_paper_arithmetic() {
        let x = worst_case_sentence_error(4_500_000, 15, 0.95, 0.5).unwrap();
        assert!((x - 0.375).abs() < 1e-12);
        assert_eq!(worst_case_sentence_error(1000, 10, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(worst_case_sentence_error(1000, 10, 0.5, 1.0).unwrap(), 1.0);
        assert!(worst_case_sentence_error(1000, 0, 0.5, 0.5).is_err());
        assert!(worst_case_sentence_error(1000, 10, 1.5, 0.5).is_err());
    }

    #[test]
    fn worst_case_monotone_in_accuracy() {
        let mut prev = f64::INFINITY;
        for acc in [0.0, 0.25, 0.5, 0.75, 0.9, 1.0] {
            let x = worst_case_sentence_error(10_000, 20, acc, 0.5).unwrap();
            assert!((0.0..=1.0).contains(&x));
            assert!(x <= prev);
            prev = x;
        }
    }

    #[test]
    fn relaxation_file_parsing() {
        let rules = parse_relaxations("# pairs\nTO <-> IN\nWP <-> WDT\n").unwrap();
        assert_eq!(rules.len(), 2);
        assert!(parse_relaxations("TO <-> TO\n").is_err());
        assert!(parse_relaxations("TO IN\n").is_err());
    }

    #[test]
    fn class_map_file_parsing() {
        let map = CoarseClassMap::parse("CD\tNOUN\nexcept CD <-> NNP\n").unwrap();
        assert_eq!(map.class_of(&tag("CD")), CoarseClass::Noun);
        assert_eq!(
            classify_error(&tag("CD"), &tag("NNP"), &map).unwrap(),
            ErrorClass::NonCritical
        );
        assert!(CoarseClassMap::parse("CD\tBANANA\n").is_err());
    }
}
