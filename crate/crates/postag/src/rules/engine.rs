//! Condition evaluation, rule application and the fixpoint correction
//! loop.
//!
//! A pass chunks the sentence, then sweeps every rule in ascending
//! priority (file order on ties) over its anchors left to right,
//! re-chunking after each mutation. The loop ends when a pass applies
//! nothing (quiescent), the pass leaves no grammatical inconsistencies
//! (consistent), a tag state repeats (oscillation, keeping the last
//! non-repeated state), or the pass cap is hit.

use super::{
    Action, Condition, CorrectionRule, EngineConfig, InconsistencyRule, PhraseRelation, RuleScope,
    RuleTrace, Termination, TraceEntry,
};
use crate::chunk::{chunk, next_phrase, prev_phrase, Phrase};
use crate::corpus::Sentence;
use crate::resources::{find_concepts, find_entities, is_polysemous, Resources, Span};
use crate::tag::Tag;
use std::collections::HashSet;

/// What a rule is evaluated against: a token position or a phrase.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Anchor {
    Token(usize),
    Phrase(Phrase),
}

impl Anchor {
    /// The token index offsets are relative to (the head for phrases).
    fn base(&self) -> usize {
        match self {
            Anchor::Token(i) => *i,
            Anchor::Phrase(p) => p.head,
        }
    }
}

/// Per-sentence context shared by all rule evaluations. Entities and
/// concepts depend only on the words, which never change, so they are
/// computed once.
#[derive(Debug)]
pub struct EvalContext<'a> {
    pub words: Vec<String>,
    pub resources: &'a Resources,
    pub entities: Vec<Span>,
    pub concepts: Vec<Span>,
}

impl<'a> EvalContext<'a> {
    pub fn for_sentence(sentence: &Sentence, resources: &'a Resources) -> EvalContext<'a> {
        EvalContext {
            words: sentence.words(),
            resources,
            entities: find_entities(&resources.gazetteer, sentence),
            concepts: find_concepts(&resources.ontology, sentence),
        }
    }
}

fn rel_index(base: usize, offset: i64, len: usize) -> Option<usize> {
    let idx = base as i64 + offset;
    if idx < 0 || idx as usize >= len {
        None
    } else {
        Some(idx as usize)
    }
}

fn span_overlaps(span: &Span, p: &Phrase) -> bool {
    span.start < p.end && span.end > p.start
}

/// Pure boolean; out-of-range offsets evaluate to false.
pub fn eval_condition(
    cond: &Condition,
    ctx: &EvalContext<'_>,
    tags: &[Tag],
    phrases: &[Phrase],
    anchor: &Anchor,
) -> bool {
    let base = anchor.base();
    match cond {
        Condition::TokenTagIs { offset, tags: want } => rel_index(base, *offset, tags.len())
            .map(|i| want.contains(&tags[i]))
            .unwrap_or(false),
        Condition::TokenTextIs {
            offset,
            text,
            fold_case,
        } => rel_index(base, *offset, ctx.words.len())
            .map(|i| {
                if *fold_case {
                    ctx.words[i].to_lowercase() == text.to_lowercase()
                } else {
                    ctx.words[i] == *text
                }
            })
            .unwrap_or(false),
        Condition::PhraseIs { relation } => match anchor {
            Anchor::Phrase(p) => match relation {
                PhraseRelation::This => true,
                PhraseRelation::Next => next_phrase(phrases, p).ok().flatten().is_some(),
                PhraseRelation::Prev => prev_phrase(phrases, p).ok().flatten().is_some(),
            },
            Anchor::Token(_) => false,
        },
        Condition::PhraseContainsEntityNotHead => match anchor {
            Anchor::Phrase(p) => ctx.entities.iter().any(|s| {
                s.start >= p.start && s.end <= p.end && !(s.start <= p.head && p.head < s.end)
            }),
            Anchor::Token(_) => false,
        },
        Condition::PhraseHeadPolysemous { required } => match anchor {
            Anchor::Phrase(p) => {
                is_polysemous(&ctx.resources.lexicon, &ctx.words[p.head], required)
            }
            Anchor::Token(_) => false,
        },
        Condition::PhraseContainsTag { tags: want } => match anchor {
            Anchor::Phrase(p) => (p.start..p.end).any(|i| want.contains(&tags[i])),
            Anchor::Token(_) => false,
        },
        Condition::PhraseSubstringInOntology => match anchor {
            Anchor::Phrase(p) => ctx.concepts.iter().any(|s| span_overlaps(s, p)),
            Anchor::Token(_) => false,
        },
    }
}

/// If all conditions hold, apply the actions to a copy of the tag
/// sequence. Returns the mutated tags, or `None` when a condition
/// fails, an action target is out of range (the rule is skipped), or
/// the actions change nothing. Word texts are never modified.
pub fn apply_rule(
    rule: &CorrectionRule,
    ctx: &EvalContext<'_>,
    tags: &[Tag],
    phrases: &[Phrase],
    anchor: &Anchor,
) -> Option<Vec<Tag>> {
    if !rule
        .conditions
        .iter()
        .all(|c| eval_condition(c, ctx, tags, phrases, anchor))
    {
        return None;
    }
    let base = anchor.base();
    let mut new = tags.to_vec();
    for action in &rule.actions {
        match action {
            Action::SetTokenTag { offset, tag } => {
                let idx = rel_index(base, *offset, new.len())?;
                new[idx] = tag.clone();
            }
            Action::SetHeadTag { tag } => {
                let Anchor::Phrase(p) = anchor else {
                    return None;
                };
                new[p.head] = tag.clone();
            }
            // Phrase structure is derived from the tags and recomputed
            // by the caller after every mutation, so the split itself
            // carries no persistent state.
            Action::SplitPhraseBeforeHead => {}
            Action::RetagConceptModifiers { from_tags, to } => {
                let Anchor::Phrase(p) = anchor else {
                    return None;
                };
                for span in &ctx.concepts {
                    if span_overlaps(span, p) {
                        for slot in &mut new[span.start..span.end] {
                            if from_tags.contains(slot) {
                                *slot = to.clone();
                            }
                        }
                    }
                }
            }
        }
    }
    if new == tags {
        None
    } else {
        Some(new)
    }
}

/// All (rule name, start index) positions where a forbidden pattern
/// matches contiguously.
pub fn detect_inconsistencies(
    rules: &[InconsistencyRule],
    tags: &[Tag],
) -> Vec<(String, usize)> {
    let mut hits = Vec::new();
    for rule in rules {
        let m = rule.pattern.len();
        if m == 0 || m > tags.len() {
            continue;
        }
        for start in 0..=tags.len() - m {
            if rule
                .pattern
                .iter()
                .enumerate()
                .all(|(j, group)| group.contains(&tags[start + j]))
            {
                hits.push((rule.name.clone(), start));
            }
        }
    }
    hits
}

/// Iterate correction passes over one sentence to a fixpoint.
pub fn correct_sentence(
    config: &EngineConfig,
    corrections: &[CorrectionRule],
    flags: &[InconsistencyRule],
    sentence: &Sentence,
    resources: &Resources,
) -> (Sentence, RuleTrace) {
    let Some(mut tags) = sentence.tags() else {
        // contract: fully tagged input; an untagged sentence passes
        // through unchanged
        return (
            sentence.clone(),
            RuleTrace {
                entries: Vec::new(),
                terminated_by: Termination::Quiescent,
            },
        );
    };
    let ctx = EvalContext::for_sentence(sentence, resources);
    let mut ordered: Vec<&CorrectionRule> = corrections.iter().collect();
    ordered.sort_by_key(|r| r.priority);

    let mut seen: HashSet<Vec<Tag>> = HashSet::new();
    seen.insert(tags.clone());
    let mut entries = Vec::new();
    let mut terminated = Termination::MaxPasses;

    'passes: for pass in 1..=config.max_passes {
        let mut applied = 0usize;
        for rule in &ordered {
            let mut scan_from = 0usize;
            loop {
                let phrases = chunk(&tags);
                let fired = match rule.scope {
                    RuleScope::Token => (scan_from..tags.len()).find_map(|i| {
                        apply_rule(rule, &ctx, &tags, &phrases, &Anchor::Token(i))
                            .map(|new| (i, new))
                    }),
                    RuleScope::Phrase => phrases
                        .iter()
                        .filter(|p| p.start >= scan_from)
                        .find_map(|p| {
                            apply_rule(rule, &ctx, &tags, &phrases, &Anchor::Phrase(p.clone()))
                                .map(|new| (p.start, new))
                        }),
                };
                let Some((pos, new_tags)) = fired else {
                    break;
                };
                if seen.contains(&new_tags) {
                    // revisiting a previous state: stop with the last
                    // non-repeated state
                    terminated = Termination::Oscillation;
                    break 'passes;
                }
                entries.push(TraceEntry {
                    pass,
                    rule: rule.name.clone(),
                    anchor: pos,
                    before: tags.clone(),
                    after: new_tags.clone(),
                });
                seen.insert(new_tags.clone());
                tags = new_tags;
                applied += 1;
                scan_from = pos + 1;
            }
        }
        if applied == 0 {
            terminated = Termination::Quiescent;
            break;
        }
        if detect_inconsistencies(flags, &tags).is_empty() {
            terminated = Termination::Consistent;
            break;
        }
    }

    (
        sentence.with_tags(&tags),
        RuleTrace {
            entries,
            terminated_by: terminated,
        },
    )
}
