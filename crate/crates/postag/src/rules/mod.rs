//! Declarative tag-correction rules: the DSL, the condition/action
//! vocabulary, and the fixpoint correction engine.

mod defaults;
mod engine;
mod parser;

pub use defaults::{default_rules, DEFAULT_RULES_TEXT};
pub use engine::{
    apply_rule, correct_sentence, detect_inconsistencies, eval_condition, Anchor, EvalContext,
};
pub use parser::{parse_rule_file, serialize_rules};

use crate::tag::Tag;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PhraseRelation {
    This,
    Next,
    Prev,
}

impl fmt::Display for PhraseRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhraseRelation::This => f.write_str("this"),
            PhraseRelation::Next => f.write_str("next"),
            PhraseRelation::Prev => f.write_str("prev"),
        }
    }
}

/// A rule condition. Offsets are relative to the anchor token (the
/// phrase head for phrase-scoped rules).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Condition {
    TokenTagIs {
        offset: i64,
        tags: BTreeSet<Tag>,
    },
    TokenTextIs {
        offset: i64,
        text: String,
        fold_case: bool,
    },
    PhraseIs {
        relation: PhraseRelation,
    },
    PhraseContainsEntityNotHead,
    PhraseHeadPolysemous {
        required: Tag,
    },
    PhraseContainsTag {
        tags: BTreeSet<Tag>,
    },
    PhraseSubstringInOntology,
}

impl Condition {
    pub fn is_phrase_scoped(&self) -> bool {
        !matches!(
            self,
            Condition::TokenTagIs { .. } | Condition::TokenTextIs { .. }
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Action {
    SetTokenTag { offset: i64, tag: Tag },
    SetHeadTag { tag: Tag },
    SplitPhraseBeforeHead,
    RetagConceptModifiers { from_tags: BTreeSet<Tag>, to: Tag },
}

impl Action {
    pub fn is_phrase_scoped(&self) -> bool {
        !matches!(self, Action::SetTokenTag { .. })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RuleScope {
    Token,
    Phrase,
}

impl fmt::Display for RuleScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleScope::Token => f.write_str("token"),
            RuleScope::Phrase => f.write_str("phrase"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CorrectionRule {
    pub name: String,
    pub scope: RuleScope,
    pub priority: i64,
    pub conditions: Vec<Condition>,
    pub actions: Vec<Action>,
}

/// A forbidden contiguous tag pattern; each group is an alternation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InconsistencyRule {
    pub name: String,
    pub pattern: Vec<BTreeSet<Tag>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Termination {
    Consistent,
    Quiescent,
    MaxPasses,
    Oscillation,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::Consistent => f.write_str("consistent"),
            Termination::Quiescent => f.write_str("quiescent"),
            Termination::MaxPasses => f.write_str("max_passes"),
            Termination::Oscillation => f.write_str("oscillation"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceEntry {
    pub pass: u32,
    pub rule: String,
    pub anchor: usize,
    pub before: Vec<Tag>,
    pub after: Vec<Tag>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleTrace {
    pub entries: Vec<TraceEntry>,
    pub terminated_by: Termination,
}

#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    pub max_passes: u32,
}

impl Default for EngineConfig {
    fn default() -> EngineConfig {
        EngineConfig { max_passes: 10 }
    }
}

/// A parsed rule file: correction rules plus inconsistency flags.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RuleSet {
    pub corrections: Vec<CorrectionRule>,
    pub flags: Vec<InconsistencyRule>,
}
