//! Lexer and recursive-descent parser for the rule DSL.
//!
//! ```text
//! file   = { rule | flag } ;
//! rule   = "rule" , string , "scope" , ("token"|"phrase") , "priority" , int ,
//!          "{" , "when" , cond , { "and" , cond } , "then" , act , { "and" , act } , "}" ;
//! flag   = "flag" , string , "pattern" , group , { group } ;
//! group  = TAG | "(" , TAG , { "|" , TAG } , ")" ;
//! cond   = IDENT , "(" , [ args ] , ")" ;    act = IDENT , "(" , [ args ] , ")" ;
//! args   = arg , { "," , arg } ;  arg = int | TAG | string ;
//! ```
//!
//! `#` starts a comment running to end of line. Tag symbols may appear
//! bare or quoted (quoting is required only where a symbol would clash
//! with DSL punctuation, e.g. the `,` tag inside argument lists).

use super::{
    Action, Condition, CorrectionRule, InconsistencyRule, PhraseRelation, RuleScope, RuleSet,
};
use crate::error::{Error, Result};
use crate::tag::Tag;
use std::collections::BTreeSet;

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Word(String),
    Str(String),
    Int(i64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Pipe,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '{' | '}' | '(' | ')' | ',' | '|' => {
                    let tok = match c {
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        _ => Tok::Pipe,
                    };
                    out.push(Spanned {
                        tok,
                        line: lineno + 1,
                        col,
                    });
                    i += 1;
                }
                '"' => {
                    let mut s = String::new();
                    i += 1;
                    loop {
                        if i >= chars.len() {
                            return Err(err(lineno + 1, col, "unterminated string literal"));
                        }
                        if chars[i] == '"' {
                            i += 1;
                            break;
                        }
                        s.push(chars[i]);
                        i += 1;
                    }
                    out.push(Spanned {
                        tok: Tok::Str(s),
                        line: lineno + 1,
                        col,
                    });
                }
                _ => {
                    let start = i;
                    while i < chars.len()
                        && !chars[i].is_whitespace()
                        && !matches!(chars[i], '{' | '}' | '(' | ')' | ',' | '|' | '"' | '#')
                    {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    let is_int = word
                        .strip_prefix('-')
                        .unwrap_or(&word)
                        .chars()
                        .all(|c| c.is_ascii_digit())
                        && word.strip_prefix('-').unwrap_or(&word).chars().count() > 0;
                    let tok = if is_int {
                        match word.parse::<i64>() {
                            Ok(n) => Tok::Int(n),
                            Err(_) => return Err(err(lineno + 1, col, "integer out of range")),
                        }
                    } else {
                        Tok::Word(word)
                    };
                    out.push(Spanned {
                        tok,
                        line: lineno + 1,
                        col,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Arg {
    Int(i64),
    Word(String),
    Str(String),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn expect_tok(&mut self, want: &Tok, what: &str) -> Result<()> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if t.tok == *want => Ok(()),
            Some(t) => Err(err(t.line, t.col, format!("expected {what}"))),
            None => Err(err(line, col, format!("expected {what}, found end of file"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        let (line, col) = self.here();
        match self.next() {
            Some(Spanned {
                tok: Tok::Word(w), ..
            }) if w == kw => Ok(()),
            Some(t) => Err(err(t.line, t.col, format!("expected keyword `{kw}`"))),
            None => Err(err(line, col, format!("expected keyword `{kw}`"))),
        }
    }

    fn expect_string(&mut self, what: &str) -> Result<(String, usize, usize)> {
        let (line, col) = self.here();
        match self.next() {
            Some(Spanned {
                tok: Tok::Str(s),
                line,
                col,
            }) => Ok((s, line, col)),
            Some(t) => Err(err(t.line, t.col, format!("expected {what} (a string)"))),
            None => Err(err(line, col, format!("expected {what}"))),
        }
    }

    fn parse_args(&mut self) -> Result<Vec<Arg>> {
        self.expect_tok(&Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::RParen)) {
            self.next();
            return Ok(args);
        }
        loop {
            let (line, col) = self.here();
            match self.next() {
                Some(Spanned {
                    tok: Tok::Int(n), ..
                }) => args.push(Arg::Int(n)),
                Some(Spanned {
                    tok: Tok::Word(w), ..
                }) => args.push(Arg::Word(w)),
                Some(Spanned {
                    tok: Tok::Str(s), ..
                }) => args.push(Arg::Str(s)),
                Some(t) => return Err(err(t.line, t.col, "expected argument")),
                None => return Err(err(line, col, "expected argument")),
            }
            match self.next() {
                Some(Spanned {
                    tok: Tok::Comma, ..
                }) => continue,
                Some(Spanned {
                    tok: Tok::RParen, ..
                }) => break,
                Some(t) => return Err(err(t.line, t.col, "expected `,` or `)`")),
                None => return Err(err(line, col, "unterminated argument list")),
            }
        }
        Ok(args)
    }

    fn parse_call(&mut self) -> Result<(String, Vec<Arg>, usize, usize)> {
        let (line, col) = self.here();
        let name = match self.next() {
            Some(Spanned {
                tok: Tok::Word(w),
                line,
                col,
            }) => (w, line, col),
            Some(t) => return Err(err(t.line, t.col, "expected predicate or action name")),
            None => return Err(err(line, col, "expected predicate or action name")),
        };
        let args = self.parse_args()?;
        Ok((name.0, args, name.1, name.2))
    }
}

fn arg_tag(arg: &Arg, line: usize, col: usize) -> Result<Tag> {
    let sym = match arg {
        Arg::Word(w) => w.as_str(),
        Arg::Str(s) => s.as_str(),
        Arg::Int(_) => return Err(err(line, col, "expected a tag, found an integer")),
    };
    Tag::parse(sym).map_err(|e| err(line, col, e.to_string()))
}

fn arg_int(arg: &Arg, line: usize, col: usize) -> Result<i64> {
    match arg {
        Arg::Int(n) => Ok(*n),
        _ => Err(err(line, col, "expected an integer offset")),
    }
}

fn arg_text(arg: &Arg, line: usize, col: usize) -> Result<String> {
    match arg {
        Arg::Str(s) => Ok(s.clone()),
        Arg::Word(w) => Ok(w.clone()),
        Arg::Int(_) => Err(err(line, col, "expected a string")),
    }
}

fn tag_set(args: &[Arg], line: usize, col: usize) -> Result<BTreeSet<Tag>> {
    let mut tags = BTreeSet::new();
    for a in args {
        tags.insert(arg_tag(a, line, col)?);
    }
    if tags.is_empty() {
        return Err(err(line, col, "expected at least one tag"));
    }
    Ok(tags)
}

fn build_condition(name: &str, args: &[Arg], line: usize, col: usize) -> Result<Condition> {
    match name {
        "token_tag_is" => {
            if args.len() < 2 {
                return Err(err(line, col, "token_tag_is(offset, TAG, ...)"));
            }
            Ok(Condition::TokenTagIs {
                offset: arg_int(&args[0], line, col)?,
                tags: tag_set(&args[1..], line, col)?,
            })
        }
        "token_text_is" => {
            if args.len() < 2 || args.len() > 3 {
                return Err(err(line, col, "token_text_is(offset, \"text\"[, fold])"));
            }
            let fold_case = match args.get(2) {
                None => true,
                Some(a) => arg_int(a, line, col)? != 0,
            };
            Ok(Condition::TokenTextIs {
                offset: arg_int(&args[0], line, col)?,
                text: arg_text(&args[1], line, col)?,
                fold_case,
            })
        }
        "phrase_is" => {
            if args.len() != 2 {
                return Err(err(line, col, "phrase_is(this|next|prev, NP)"));
            }
            let relation = match arg_text(&args[0], line, col)?.as_str() {
                "this" => PhraseRelation::This,
                "next" => PhraseRelation::Next,
                "prev" => PhraseRelation::Prev,
                other => {
                    return Err(err(line, col, format!("unknown phrase relation `{other}`")))
                }
            };
            let cat = arg_text(&args[1], line, col)?;
            if cat != "NP" {
                return Err(err(line, col, format!("unknown phrase category `{cat}`")));
            }
            Ok(Condition::PhraseIs { relation })
        }
        "phrase_contains_entity_not_head" => {
            if !args.is_empty() {
                return Err(err(line, col, "phrase_contains_entity_not_head()"));
            }
            Ok(Condition::PhraseContainsEntityNotHead)
        }
        "phrase_head_polysemous" => {
            if args.len() != 1 {
                return Err(err(line, col, "phrase_head_polysemous(TAG)"));
            }
            Ok(Condition::PhraseHeadPolysemous {
                required: arg_tag(&args[0], line, col)?,
            })
        }
        "phrase_contains_tag" => Ok(Condition::PhraseContainsTag {
            tags: tag_set(args, line, col)?,
        }),
        "phrase_substring_in_ontology" => {
            if !args.is_empty() {
                return Err(err(line, col, "phrase_substring_in_ontology()"));
            }
            Ok(Condition::PhraseSubstringInOntology)
        }
        other => Err(err(line, col, format!("unknown predicate `{other}`"))),
    }
}

fn build_action(name: &str, args: &[Arg], line: usize, col: usize) -> Result<Action> {
    match name {
        "set_token_tag" => {
            if args.len() != 2 {
                return Err(err(line, col, "set_token_tag(offset, TAG)"));
            }
            Ok(Action::SetTokenTag {
                offset: arg_int(&args[0], line, col)?,
                tag: arg_tag(&args[1], line, col)?,
            })
        }
        "set_head_tag" => {
            if args.len() != 1 {
                return Err(err(line, col, "set_head_tag(TAG)"));
            }
            Ok(Action::SetHeadTag {
                tag: arg_tag(&args[0], line, col)?,
            })
        }
        "split_phrase_before_head" => {
            if !args.is_empty() {
                return Err(err(line, col, "split_phrase_before_head()"));
            }
            Ok(Action::SplitPhraseBeforeHead)
        }
        "retag_concept_modifiers" => {
            if args.len() < 2 {
                return Err(err(line, col, "retag_concept_modifiers(FROM..., TO)"));
            }
            let to = arg_tag(args.last().unwrap(), line, col)?;
            Ok(Action::RetagConceptModifiers {
                from_tags: tag_set(&args[..args.len() - 1], line, col)?,
                to,
            })
        }
        other => Err(err(line, col, format!("unknown action `{other}`"))),
    }
}

/// Parse a rule file into correction rules and inconsistency flags,
/// in file order. Duplicate names are rejected.
pub fn parse_rule_file(text: &str) -> Result<RuleSet> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut set = RuleSet::default();

    while let Some(t) = p.peek().cloned() {
        match &t.tok {
            Tok::Word(w) if w == "rule" => {
                p.next();
                let (name, nline, ncol) = p.expect_string("rule name")?;
                if set.corrections.iter().any(|r| r.name == name) {
                    return Err(err(nline, ncol, format!("duplicate rule name `{name}`")));
                }
                p.expect_keyword("scope")?;
                let (sline, scol) = p.here();
                let scope = match p.next() {
                    Some(Spanned {
                        tok: Tok::Word(w), ..
                    }) if w == "token" => RuleScope::Token,
                    Some(Spanned {
                        tok: Tok::Word(w), ..
                    }) if w == "phrase" => RuleScope::Phrase,
                    _ => return Err(err(sline, scol, "expected scope `token` or `phrase`")),
                };
                p.expect_keyword("priority")?;
                let (iline, icol) = p.here();
                let priority = match p.next() {
                    Some(Spanned {
                        tok: Tok::Int(n), ..
                    }) => n,
                    _ => return Err(err(iline, icol, "expected integer priority")),
                };
                p.expect_tok(&Tok::LBrace, "`{`")?;
                p.expect_keyword("when")?;
                let mut conditions = Vec::new();
                loop {
                    let (cname, cargs, cline, ccol) = p.parse_call()?;
                    let cond = build_condition(&cname, &cargs, cline, ccol)?;
                    if scope == RuleScope::Token && cond.is_phrase_scoped() {
                        return Err(err(
                            cline,
                            ccol,
                            format!("phrase condition `{cname}` in token-scoped rule `{name}`"),
                        ));
                    }
                    conditions.push(cond);
                    match p.peek().map(|t| t.tok.clone()) {
                        Some(Tok::Word(w)) if w == "and" => {
                            p.next();
                        }
                        _ => break,
                    }
                }
                p.expect_keyword("then")?;
                let mut actions = Vec::new();
                loop {
                    let (aname, aargs, aline, acol) = p.parse_call()?;
                    let act = build_action(&aname, &aargs, aline, acol)?;
                    if scope == RuleScope::Token && act.is_phrase_scoped() {
                        return Err(err(
                            aline,
                            acol,
                            format!("phrase action `{aname}` in token-scoped rule `{name}`"),
                        ));
                    }
                    actions.push(act);
                    match p.peek().map(|t| t.tok.clone()) {
                        Some(Tok::Word(w)) if w == "and" => {
                            p.next();
                        }
                        _ => break,
                    }
                }
                p.expect_tok(&Tok::RBrace, "`}`")?;
                set.corrections.push(CorrectionRule {
                    name,
                    scope,
                    priority,
                    conditions,
                    actions,
                });
            }
            Tok::Word(w) if w == "flag" => {
                p.next();
                let (name, nline, ncol) = p.expect_string("flag name")?;
                if set.flags.iter().any(|r| r.name == name) {
                    return Err(err(nline, ncol, format!("duplicate flag name `{name}`")));
                }
                p.expect_keyword("pattern")?;
                let mut pattern: Vec<BTreeSet<Tag>> = Vec::new();
                loop {
                    match p.peek().map(|t| t.tok.clone()) {
                        Some(Tok::LParen) => {
                            p.next();
                            let mut group = BTreeSet::new();
                            loop {
                                let (gline, gcol) = p.here();
                                match p.next() {
                                    Some(Spanned {
                                        tok: Tok::Word(w),
                                        line,
                                        col,
                                    }) => {
                                        group.insert(
                                            Tag::parse(&w)
                                                .map_err(|e| err(line, col, e.to_string()))?,
                                        );
                                    }
                                    Some(Spanned {
                                        tok: Tok::Str(s),
                                        line,
                                        col,
                                    }) => {
                                        group.insert(
                                            Tag::parse(&s)
                                                .map_err(|e| err(line, col, e.to_string()))?,
                                        );
                                    }
                                    _ => return Err(err(gline, gcol, "expected tag in group")),
                                }
                                match p.next() {
                                    Some(Spanned { tok: Tok::Pipe, .. }) => continue,
                                    Some(Spanned {
                                        tok: Tok::RParen, ..
                                    }) => break,
                                    _ => return Err(err(gline, gcol, "expected `|` or `)`")),
                                }
                            }
                            pattern.push(group);
                        }
                        Some(Tok::Word(w)) if Tag::is_known(&w) => {
                            let t = p.next().unwrap();
                            pattern.push(
                                [Tag::parse(&w).map_err(|e| err(t.line, t.col, e.to_string()))?]
                                    .into_iter()
                                    .collect(),
                            );
                        }
                        Some(Tok::Str(s)) if Tag::is_known(&s) => {
                            let t = p.next().unwrap();
                            pattern.push(
                                [Tag::parse(&s).map_err(|e| err(t.line, t.col, e.to_string()))?]
                                    .into_iter()
                                    .collect(),
                            );
                        }
                        _ => break,
                    }
                }
                if pattern.is_empty() {
                    return Err(err(nline, ncol, format!("flag `{name}` has no pattern")));
                }
                set.flags.push(InconsistencyRule { name, pattern });
            }
            _ => {
                return Err(err(t.line, t.col, "expected `rule` or `flag`"));
            }
        }
    }
    Ok(set)
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

fn fmt_tag_arg(tag: &Tag) -> String {
    // punctuation symbols collide with DSL delimiters; quote them
    let sym = tag.symbol();
    if sym.chars().all(|c| c.is_ascii_alphanumeric() || c == '$' || c == '-') && !sym.is_empty() {
        sym.to_string()
    } else {
        quote(sym)
    }
}

fn fmt_condition(c: &Condition) -> String {
    match c {
        Condition::TokenTagIs { offset, tags } => {
            let tags: Vec<String> = tags.iter().map(fmt_tag_arg).collect();
            format!("token_tag_is({offset}, {})", tags.join(", "))
        }
        Condition::TokenTextIs {
            offset,
            text,
            fold_case,
        } => {
            if *fold_case {
                format!("token_text_is({offset}, {})", quote(text))
            } else {
                format!("token_text_is({offset}, {}, 0)", quote(text))
            }
        }
        Condition::PhraseIs { relation } => format!("phrase_is({relation}, NP)"),
        Condition::PhraseContainsEntityNotHead => "phrase_contains_entity_not_head()".into(),
        Condition::PhraseHeadPolysemous { required } => {
            format!("phrase_head_polysemous({})", fmt_tag_arg(required))
        }
        Condition::PhraseContainsTag { tags } => {
            let tags: Vec<String> = tags.iter().map(fmt_tag_arg).collect();
            format!("phrase_contains_tag({})", tags.join(", "))
        }
        Condition::PhraseSubstringInOntology => "phrase_substring_in_ontology()".into(),
    }
}

fn fmt_action(a: &Action) -> String {
    match a {
        Action::SetTokenTag { offset, tag } => {
            format!("set_token_tag({offset}, {})", fmt_tag_arg(tag))
        }
        Action::SetHeadTag { tag } => format!("set_head_tag({})", fmt_tag_arg(tag)),
        Action::SplitPhraseBeforeHead => "split_phrase_before_head()".into(),
        Action::RetagConceptModifiers { from_tags, to } => {
            let mut args: Vec<String> = from_tags.iter().map(fmt_tag_arg).collect();
            args.push(fmt_tag_arg(to));
            format!("retag_concept_modifiers({})", args.join(", "))
        }
    }
}

fn fmt_group(group: &BTreeSet<Tag>) -> String {
    if group.len() == 1 {
        let t = group.iter().next().unwrap();
        if Tag::is_known(t.symbol()) && !t.is_punct() {
            return t.symbol().to_string();
        }
        return fmt_tag_arg(t);
    }
    let alts: Vec<&str> = group.iter().map(Tag::symbol).collect();
    format!("({})", alts.join("|"))
}

/// Render a rule set back into DSL text; `parse_rule_file` round-trips.
pub fn serialize_rules(set: &RuleSet) -> String {
    let mut out = String::new();
    for rule in &set.corrections {
        out.push_str(&format!(
            "rule {} scope {} priority {} {{\n",
            quote(&rule.name),
            rule.scope,
            rule.priority
        ));
        for (i, c) in rule.conditions.iter().enumerate() {
            let kw = if i == 0 { "when" } else { " and" };
            out.push_str(&format!("  {kw} {}\n", fmt_condition(c)));
        }
        for (i, a) in rule.actions.iter().enumerate() {
            let kw = if i == 0 { "then" } else { " and" };
            out.push_str(&format!("  {kw} {}\n", fmt_action(a)));
        }
        out.push_str("}\n");
    }
    for flag in &set.flags {
        let groups: Vec<String> = flag.pattern.iter().map(fmt_group).collect();
        out.push_str(&format!(
            "flag {} pattern {}\n",
            quote(&flag.name),
            groups.join(" ")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tag::tag;

    #[test]
    fn empty_file() {
        let set = parse_rule_file("").unwrap();
        assert!(set.corrections.is_empty() && set.flags.is_empty());
        let set = parse_rule_file("# just a comment\n").unwrap();
        assert!(set.corrections.is_empty());
    }

    #[test]
    fn parse_simple_rule() {
        let set = parse_rule_file(
            "rule \"r\" scope token priority 5 {\n  when token_tag_is(0, VBG) and token_tag_is(-1, DT)\n  then set_token_tag(0, JJ)\n}\n",
        )
        .unwrap();
        assert_eq!(set.corrections.len(), 1);
        let r = &set.corrections[0];
        assert_eq!(r.priority, 5);
        assert_eq!(r.scope, RuleScope::Token);
        assert_eq!(r.conditions.len(), 2);
        assert_eq!(
            r.actions,
            vec![Action::SetTokenTag {
                offset: 0,
                tag: tag("JJ")
            }]
        );
    }

    #[test]
    fn parse_flag_with_groups() {
        let set = parse_rule_file("flag \"f\" pattern DT (VB|VBZ) .\n").unwrap();
        assert_eq!(set.flags.len(), 1);
        let f = &set.flags[0];
        assert_eq!(f.pattern.len(), 3);
        assert_eq!(f.pattern[1].len(), 2);
        assert!(f.pattern[2].contains(&tag(".")));
    }

    #[test]
    fn duplicate_rule_name_rejected() {
        let text = "rule \"r\" scope token priority 1 { when token_tag_is(0, NN) then set_token_tag(0, JJ) }\nrule \"r\" scope token priority 2 { when token_tag_is(0, JJ) then set_token_tag(0, NN) }\n";
        let e = parse_rule_file(text).unwrap_err();
        assert!(e.to_string().contains("duplicate rule name `r`"));
    }

    #[test]
    fn phrase_condition_in_token_scope_rejected() {
        let text = "rule \"r\" scope token priority 1 { when phrase_is(this, NP) then set_token_tag(0, JJ) }\n";
        assert!(parse_rule_file(text).is_err());
    }

    #[test]
    fn unknown_names_rejected() {
        assert!(parse_rule_file(
            "rule \"r\" scope token priority 1 { when frobnicate(0) then set_token_tag(0, JJ) }"
        )
        .is_err());
        assert!(parse_rule_file(
            "rule \"r\" scope token priority 1 { when token_tag_is(0, NN) then explode() }"
        )
        .is_err());
        assert!(parse_rule_file(
            "rule \"r\" scope token priority 1 { when token_tag_is(0, BOGUS) then set_token_tag(0, JJ) }"
        )
        .is_err());
    }

    #[test]
    fn syntax_error_carries_position() {
        let e = parse_rule_file("rule \"r\" scope banana priority 1 { }").unwrap_err();
        match e {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn serialize_round_trips() {
        let set = super::super::default_rules();
        let text = serialize_rules(&set);
        let reparsed = parse_rule_file(&text).unwrap();
        assert_eq!(set, reparsed);
    }
}
