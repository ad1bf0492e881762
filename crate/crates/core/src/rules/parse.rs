use std::collections::HashMap;

use thiserror::Error;

use super::ast::*;
use crate::lex::{is_identifier, Cursor, LitStr, Pos, SyntaxError, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: duplicate rule name \"{name}\"")]
    DuplicateRule { name: String, pos: Pos },
    #[error("{pos}: unknown metadata keyword `{keyword}` (expected description, severity, probability or relevantFor)")]
    UnknownMetadata { keyword: String, pos: Pos },
    #[error("{pos}: `{keyword}` given more than once")]
    RepeatedMetadata { keyword: String, pos: Pos },
    #[error("{pos}: invalid {keyword} `{value}`, expected one of: {valid}")]
    InvalidLiteral {
        keyword: String,
        value: String,
        valid: &'static str,
        pos: Pos,
    },
    #[error("{pos}: rule \"{rule}\" has no description")]
    MissingDescription { rule: String, pos: Pos },
    #[error("{pos}: rule name must not be empty")]
    EmptyName { pos: Pos },
    #[error("{pos}: bad hint template: {message}")]
    Template { pos: Pos, message: String },
}

impl RuleError {
    pub fn pos(&self) -> Pos {
        match self {
            RuleError::Syntax(e) => e.pos,
            RuleError::DuplicateRule { pos, .. }
            | RuleError::UnknownMetadata { pos, .. }
            | RuleError::RepeatedMetadata { pos, .. }
            | RuleError::InvalidLiteral { pos, .. }
            | RuleError::MissingDescription { pos, .. }
            | RuleError::EmptyName { pos }
            | RuleError::Template { pos, .. } => *pos,
        }
    }
}

pub fn parse_rules(text: &str) -> Result<RuleSet, RuleError> {
    let mut cur = Cursor::new(text)?;
    let mut rules = Vec::new();
    let mut seen: HashMap<String, Pos> = HashMap::new();
    while !cur.at_eof() {
        let pos = cur.pos();
        let rule = parse_rule(&mut cur)?;
        if seen.insert(rule.name.clone(), pos).is_some() {
            return Err(RuleError::DuplicateRule { name: rule.name, pos });
        }
        rules.push(rule);
    }
    Ok(RuleSet { rules })
}

/// Concatenates rule sets in order, rejecting names that occur twice.
pub fn merge_rule_sets(sets: impl IntoIterator<Item = RuleSet>) -> Result<RuleSet, RuleError> {
    let mut out = RuleSet::default();
    for set in sets {
        for rule in set.rules {
            if out.rule(&rule.name).is_some() {
                return Err(RuleError::DuplicateRule {
                    name: rule.name,
                    pos: Pos::default(),
                });
            }
            out.rules.push(rule);
        }
    }
    Ok(out)
}

fn parse_rule(cur: &mut Cursor) -> Result<ImpactRuleDecl, RuleError> {
    let start = cur.expect_keyword("impactRule")?;
    let (name, name_pos) = cur.expect_str()?;
    let name = name.text();
    if name.is_empty() {
        return Err(RuleError::EmptyName { pos: name_pos });
    }
    cur.expect_sym("{")?;

    let mut description = None;
    let mut severity = None;
    let mut probability = None;
    let mut relevant_for = None;
    loop {
        let (kw, pos) = match cur.peek() {
            Tok::Ident(kw) if kw != "impact" => (kw.clone(), cur.pos()),
            Tok::Ident(_) => break,
            _ => return Err(cur.error("metadata or `impact`").into()),
        };
        cur.advance();
        let repeated = || RuleError::RepeatedMetadata {
            keyword: kw.clone(),
            pos,
        };
        match kw.as_str() {
            "description" => {
                cur.expect_sym("=")?;
                if description.replace(cur.expect_str()?.0.text()).is_some() {
                    return Err(repeated());
                }
            }
            "relevantFor" => {
                cur.expect_sym("=")?;
                if relevant_for.replace(cur.expect_str()?.0.text()).is_some() {
                    return Err(repeated());
                }
            }
            "severity" => {
                cur.expect_sym("=")?;
                let v = enum_literal::<Severity>(cur, "severity", Severity::VALID)?;
                if severity.replace(v).is_some() {
                    return Err(repeated());
                }
            }
            "probability" => {
                cur.expect_sym("=")?;
                let v = enum_literal::<Probability>(cur, "probability", Probability::VALID)?;
                if probability.replace(v).is_some() {
                    return Err(repeated());
                }
            }
            _ => return Err(RuleError::UnknownMetadata { keyword: kw, pos }),
        }
    }
    let Some(description) = description else {
        return Err(RuleError::MissingDescription { rule: name, pos: start });
    };

    cur.expect_keyword("impact")?;
    cur.expect_sym("{")?;
    let mut entries = Vec::new();
    while !cur.is_sym("}") {
        let condition = parse_or(cur)?;
        cur.expect_sym("=>")?;
        let (lit, pos) = cur.expect_str()?;
        let hint = parse_template(&lit).map_err(|message| RuleError::Template { pos, message })?;
        entries.push(ImpactEntry { condition, hint });
    }
    cur.expect_sym("}")?;
    cur.expect_sym("}")?;
    Ok(ImpactRuleDecl {
        name,
        description,
        severity,
        probability,
        relevant_for,
        entries,
    })
}

fn enum_literal<T: std::str::FromStr>(
    cur: &mut Cursor,
    keyword: &str,
    valid: &'static str,
) -> Result<T, RuleError> {
    let (value, pos) = cur.expect_ident(valid)?;
    value.parse().map_err(|_| RuleError::InvalidLiteral {
        keyword: keyword.into(),
        value,
        valid,
        pos,
    })
}

pub(crate) fn parse_or(cur: &mut Cursor) -> Result<ConditionExpr, SyntaxError> {
    let mut left = parse_and(cur)?;
    while cur.eat_sym("||") {
        left = ConditionExpr::or(left, parse_and(cur)?);
    }
    Ok(left)
}

fn parse_and(cur: &mut Cursor) -> Result<ConditionExpr, SyntaxError> {
    let mut left = parse_unary(cur)?;
    while cur.eat_sym("&&") {
        left = ConditionExpr::and(left, parse_unary(cur)?);
    }
    Ok(left)
}

fn parse_unary(cur: &mut Cursor) -> Result<ConditionExpr, SyntaxError> {
    if cur.eat_sym("!") {
        return Ok(ConditionExpr::not(parse_unary(cur)?));
    }
    if cur.eat_sym("(") {
        let e = parse_or(cur)?;
        cur.expect_sym(")")?;
        return Ok(e);
    }
    let predefined = cur.is_keyword("pc") && matches!(cur.peek_at(1), Tok::Sym("."));
    if predefined {
        cur.advance();
        cur.advance();
    }
    let (name, _) = cur.expect_ident("condition")?;
    let args = parse_args(cur, true)?;
    Ok(if predefined {
        ConditionExpr::Predefined { name, args }
    } else {
        ConditionExpr::User { name, args }
    })
}

/// `'(' (STRING (',' STRING)*)? ')'`; with `commas_required == false` the
/// separating commas are optional.
pub(crate) fn parse_args(cur: &mut Cursor, commas_required: bool) -> Result<Vec<String>, SyntaxError> {
    cur.expect_sym("(")?;
    let mut args = Vec::new();
    if cur.eat_sym(")") {
        return Ok(args);
    }
    loop {
        args.push(cur.expect_str()?.0.text());
        if cur.eat_sym(")") {
            return Ok(args);
        }
        if !cur.eat_sym(",") && commas_required {
            return Err(cur.error("`,` or `)`"));
        }
    }
}

/// Splits a decoded literal into text and `{placeholder}` segments.
/// Escaped braces are text; a placeholder name is an identifier, optionally
/// dotted (`{element.name}`).
pub fn parse_template(lit: &LitStr) -> Result<HintTemplate, String> {
    let mut segments = Vec::new();
    let mut text = String::new();
    let mut chars = lit.chars.iter().copied();
    while let Some((c, escaped)) = chars.next() {
        match (c, escaped) {
            ('{', false) => {
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some(('}', false)) => break,
                        Some((c, false)) => name.push(c),
                        Some((c, true)) => {
                            return Err(format!("escape `{}` inside placeholder", c.escape_default()))
                        }
                        None => return Err("unclosed `{`".into()),
                    }
                }
                if !is_placeholder_name(&name) {
                    return Err(format!("`{{{name}}}` is not a placeholder name"));
                }
                segments.push(Segment::Literal(std::mem::take(&mut text)));
                segments.push(Segment::Placeholder(name));
            }
            ('}', false) => return Err("unescaped `}` (write `\\}`)".into()),
            (c, _) => text.push(c),
        }
    }
    segments.push(Segment::Literal(text));
    Ok(HintTemplate::new(segments))
}

pub fn is_placeholder_name(name: &str) -> bool {
    !name.is_empty() && name.split('.').all(is_identifier)
}
