//! The shipped starter rule set.

use super::{parse_rule_file, RuleSet};

/// Source text of the shipped rule file.
pub const DEFAULT_RULES_TEXT: &str = include_str!("../../../../resources/default.rules");

/// The shipped defaults: 4 correction rules and 8 inconsistency flags.
pub fn default_rules() -> RuleSet {
    parse_rule_file(DEFAULT_RULES_TEXT).expect("shipped rule file must parse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{Action, Condition, RuleScope};
    use crate::tag::tag;

    #[test]
    fn shipped_counts() {
        let set = default_rules();
        assert_eq!(set.corrections.len(), 4);
        assert_eq!(set.flags.len(), 8);
    }

    #[test]
    fn rule_names() {
        let set = default_rules();
        let names: Vec<&str> = set.corrections.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "np-head-polysemous-verb",
                "dt-vbg-to-jj",
                "ontology-concept-nominalize",
                "contraction-pos-to-vb"
            ]
        );
        let flags: Vec<&str> = set.flags.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(
            flags,
            vec![
                "dt-before-verb",
                "md-before-finite-verb",
                "pos-before-in",
                "to-before-finite-verb",
                "dt-sentence-final",
                "double-determiner",
                "in-sentence-final-after-verbless",
                "cc-sentence-initial-lone"
            ]
        );
    }

    #[test]
    fn dt_vbg_rule_shape() {
        let set = default_rules();
        let r = &set.corrections[1];
        assert_eq!(r.scope, RuleScope::Token);
        assert!(r.conditions.contains(&Condition::TokenTagIs {
            offset: 0,
            tags: [tag("VBG")].into_iter().collect(),
        }));
        assert!(r.conditions.contains(&Condition::TokenTagIs {
            offset: -1,
            tags: [tag("DT")].into_iter().collect(),
        }));
        assert_eq!(
            r.actions,
            vec![Action::SetTokenTag {
                offset: 0,
                tag: tag("JJ")
            }]
        );
    }
}
