//! A hybrid part-of-speech tagging toolkit: a trainable averaged
//! perceptron, a declarative rule-correction layer driven to a
//! fixpoint, noun-phrase chunking, lexical resources, and sentence
//! oriented evaluation.

pub mod chunk;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod perceptron;
pub mod pipeline;
pub mod resources;
pub mod rules;
pub mod tag;

pub use chunk::{chunk, Phrase, PhraseCategory};
pub use corpus::{
    kfold_split, parse_columnar, parse_plain, parse_slash, serialize, Corpus, FoldSplit, Format,
    ParseOptions, Sentence, Token,
};
pub use error::{Error, Result};
pub use eval::{
    classify_error, confusion_matrix, crossvalidate, default_relaxations, evaluate, pareto_stats,
    rank_confusions, relaxed_match, sentence_accuracy, token_accuracy, worst_case_sentence_error,
    CoarseClass, CoarseClassMap, ConfusionMatrix, CrossValOptions, CrossValReport, ErrorClass,
    EvalReport, RelaxationRule,
};
pub use perceptron::{
    load_model, predict, preprocess_constraints, save_model, train, PerceptronModel,
    TagConstraint, TrainConfig,
};
pub use pipeline::{all_resolved, correct_corpus, Pipeline};
pub use resources::{
    build_lexicon, find_concepts, find_entities, Gazetteer, Lexicon, Ontology, PhraseList,
    Resources, Span,
};
pub use rules::{
    correct_sentence, default_rules, detect_inconsistencies, parse_rule_file, serialize_rules,
    Action, Condition, CorrectionRule, EngineConfig, InconsistencyRule, RuleScope, RuleSet,
    RuleTrace, Termination, TraceEntry,
};
pub use tag::Tag;
