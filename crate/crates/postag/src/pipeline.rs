//! The end-to-end tagging pipeline: lexicon/ontology constraints, the
//! perceptron pass, and the optional rule-correction layer.

use crate::corpus::{Corpus, Sentence};
use crate::perceptron::{predict, preprocess_constraints, PerceptronModel};
use crate::resources::Resources;
use crate::rules::{correct_sentence, EngineConfig, RuleSet, RuleTrace, Termination};

/// A configured tagger. `resources` enables the constraint
/// preprocessing pass; `rules` enables post-hoc correction (which uses
/// `resources` too when present).
pub struct Pipeline<'a> {
    pub model: &'a PerceptronModel,
    pub resources: Option<&'a Resources>,
    pub rules: Option<&'a RuleSet>,
    pub engine: EngineConfig,
}

impl Pipeline<'_> {
    /// Tag one sentence from its surface words. The trace is present
    /// only when a rule layer is configured.
    pub fn tag_sentence(&self, words: &[String]) -> (Sentence, Option<RuleTrace>) {
        let constraints = match self.resources {
            Some(res) => preprocess_constraints(&res.lexicon, &res.ontology, words),
            None => Vec::new(),
        };
        let tags = predict(self.model, words, &constraints);
        let tagged = Sentence::new(
            words
                .iter()
                .zip(tags)
                .map(|(w, t)| crate::corpus::Token::new(w.clone(), Some(t)))
                .collect(),
        );
        match self.rules {
            None => (tagged, None),
            Some(rules) => {
                let empty = Resources::default();
                let res = self.resources.unwrap_or(&empty);
                let (corrected, trace) = correct_sentence(
                    &self.engine,
                    &rules.corrections,
                    &rules.flags,
                    &tagged,
                    res,
                );
                (corrected, Some(trace))
            }
        }
    }

    /// Tag every sentence of a corpus. Existing tags are ignored; only
    /// the surface words are read. Traces are empty without a rule
    /// layer.
    pub fn tag_corpus(&self, corpus: &Corpus) -> (Corpus, Vec<RuleTrace>) {
        let mut sentences = Vec::with_capacity(corpus.sentences.len());
        let mut traces = Vec::new();
        for s in &corpus.sentences {
            let (tagged, trace) = self.tag_sentence(&s.words());
            sentences.push(tagged);
            traces.extend(trace);
        }
        (Corpus::new(sentences, corpus.source_name.clone()), traces)
    }
}

/// Run only the correction layer over an already-tagged corpus.
pub fn correct_corpus(
    rules: &RuleSet,
    resources: &Resources,
    engine: &EngineConfig,
    corpus: &Corpus,
) -> (Corpus, Vec<RuleTrace>) {
    let mut sentences = Vec::with_capacity(corpus.sentences.len());
    let mut traces = Vec::with_capacity(corpus.sentences.len());
    for s in &corpus.sentences {
        let (corrected, trace) =
            correct_sentence(engine, &rules.corrections, &rules.flags, s, resources);
        sentences.push(corrected);
        traces.push(trace);
    }
    (Corpus::new(sentences, corpus.source_name.clone()), traces)
}

/// True when no trace reports an unresolved state (max_passes or
/// oscillation).
pub fn all_resolved(traces: &[RuleTrace]) -> bool {
    traces.iter().all(|t| {
        matches!(
            t.terminated_by,
            Termination::Consistent | Termination::Quiescent
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_slash, ParseOptions};
    use crate::perceptron::{train, TrainConfig};
    use crate::rules::default_rules;

    fn training_corpus() -> Corpus {
        let mut text = String::new();
        for _ in 0..30 {
            text.push_str("the/DT dog/NN runs/VBZ ./.\n");
            text.push_str("a/DT cat/NN sleeps/VBZ ./.\n");
        }
        parse_slash(&text, ParseOptions::default()).unwrap()
    }

    #[test]
    fn plain_pipeline_tags_training_words() {
        let model = train(&training_corpus(), &TrainConfig::default()).unwrap();
        let p = Pipeline {
            model: &model,
            resources: None,
            rules: None,
            engine: EngineConfig::default(),
        };
        let words: Vec<String> = ["the", "dog", "sleeps", "."]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (tagged, trace) = p.tag_sentence(&words);
        assert!(trace.is_none());
        let tags: Vec<String> = tagged
            .tokens
            .iter()
            .map(|t| t.tag.as_ref().unwrap().symbol().to_string())
            .collect();
        assert_eq!(tags, vec!["DT", "NN", "VBZ", "."]);
    }

    #[test]
    fn rule_layer_produces_traces() {
        let model = train(&training_corpus(), &TrainConfig::default()).unwrap();
        let rules = default_rules();
        let p = Pipeline {
            model: &model,
            resources: None,
            rules: Some(&rules),
            engine: EngineConfig::default(),
        };
        let words: Vec<String> = ["the", "dog", "runs", "."]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (_, trace) = p.tag_sentence(&words);
        assert!(trace.is_some());
    }

    #[test]
    fn correct_corpus_preserves_words() {
        let corpus =
            parse_slash("An/DT accompanying/VBG record/NN ./.\n", ParseOptions::default())
                .unwrap();
        let rules = default_rules();
        let (out, traces) = correct_corpus(
            &rules,
            &Resources::default(),
            &EngineConfig::default(),
            &corpus,
        );
        assert_eq!(traces.len(), 1);
        assert_eq!(out.sentences[0].words(), corpus.sentences[0].words());
        // dt-vbg-to-jj fires
        assert_eq!(
            out.sentences[0].tokens[1].tag.as_ref().unwrap().symbol(),
            "JJ"
        );
        assert!(all_resolved(&traces));
    }
}
