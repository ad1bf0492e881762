//! Declarative extension file (`.irx`): named conditions and placeholders that
//! rules refer to without the `pc.` prefix.
//!
//! ```text
//! define condition addedActiveClass = pc.addedClass() && pc.elementHasStereotype("active");
//! define placeholder ORMFileExcerpt = orm.excerpt();
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use super::ast::ConditionExpr;
use super::parse::{parse_args, parse_or};
use crate::lex::{Cursor, Pos, SyntaxError, Tok};

/// Placeholder providers shipped with the engine, with their argument count.
pub const PROVIDERS: &[(&str, usize)] = &[
    ("element.name", 0),
    ("element.qualifiedName", 0),
    ("change.description", 0),
    ("change.oldValue", 0),
    ("change.newValue", 0),
    ("orm.excerpt", 0),
    ("property.key", 1),
    ("property.fileName", 0),
    ("sql.identifier", 0),
    ("sql.hits", 0),
    ("migration.stub", 0),
];

pub fn provider_arity(path: &str) -> Option<usize> {
    PROVIDERS.iter().find(|(p, _)| *p == path).map(|(_, n)| *n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtensionKind {
    Condition,
    Placeholder,
}

impl fmt::Display for ExtensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionKind::Condition => "condition",
            ExtensionKind::Placeholder => "placeholder",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionBody {
    Condition(ConditionExpr),
    Placeholder { provider: String, args: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionDecl {
    pub name: String,
    pub body: ExtensionBody,
}

impl ExtensionDecl {
    pub fn kind(&self) -> ExtensionKind {
        match self.body {
            ExtensionBody::Condition(_) => ExtensionKind::Condition,
            ExtensionBody::Placeholder { .. } => ExtensionKind::Placeholder,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {kind} `{name}` defined twice")]
    Duplicate { kind: ExtensionKind, name: String, pos: Pos },
    #[error("cyclic condition definitions: {}", cycle.join(" -> "))]
    Cycle { cycle: Vec<String> },
    #[error("{pos}: unknown placeholder provider `{provider}`")]
    UnknownProvider { provider: String, pos: Pos },
}

pub fn parse_extensions(text: &str) -> Result<Vec<ExtensionDecl>, ExtError> {
    parse_extensions_with(text, |p| provider_arity(p).is_some())
}

/// Like [`parse_extensions`] with a caller-supplied provider catalog.
pub fn parse_extensions_with(
    text: &str,
    known_provider: impl Fn(&str) -> bool,
) -> Result<Vec<ExtensionDecl>, ExtError> {
    let mut cur = Cursor::new(text)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    while !cur.at_eof() {
        cur.expect_keyword("define")?;
        let kind = match cur.peek() {
            Tok::Ident(k) if k == "condition" => ExtensionKind::Condition,
            Tok::Ident(k) if k == "placeholder" => ExtensionKind::Placeholder,
            _ => return Err(cur.error("`condition` or `placeholder`").into()),
        };
        cur.advance();
        let (name, pos) = cur.expect_ident("name")?;
        cur.expect_sym("=")?;
        let body = match kind {
            ExtensionKind::Condition => ExtensionBody::Condition(parse_or(&mut cur)?),
            ExtensionKind::Placeholder => {
                let ppos = cur.pos();
                let mut provider = cur.expect_ident("provider")?.0;
                while cur.eat_sym(".") {
                    provider.push('.');
                    provider.push_str(&cur.expect_ident("provider segment")?.0);
                }
                if !known_provider(&provider) {
                    return Err(ExtError::UnknownProvider { provider, pos: ppos });
                }
                let args = parse_args(&mut cur, false)?;
                ExtensionBody::Placeholder { provider, args }
            }
        };
        cur.expect_sym(";")?;
        if !seen.insert((kind, name.clone())) {
            return Err(ExtError::Duplicate { kind, name, pos });
        }
        out.push(ExtensionDecl { name, body });
    }
    check_cycles(&out)?;
    Ok(out)
}

/// Depth-first search over condition-to-condition references. Forward
/// references are fine; only cycles are rejected.
pub(crate) fn check_cycles(exts: &[ExtensionDecl]) -> Result<(), ExtError> {
    let bodies: HashMap<&str, &ConditionExpr> = exts
        .iter()
        .filter_map(|e| match &e.body {
            ExtensionBody::Condition(c) => Some((e.name.as_str(), c)),
            ExtensionBody::Placeholder { .. } => None,
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit<'a>(
        name: &'a str,
        bodies: &HashMap<&'a str, &'a ConditionExpr>,
        marks: &mut HashMap<&'a str, Mark>,
        stack: &mut Vec<&'a str>,
    ) -> Result<(), ExtError> {
        match marks.get(name) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Active) => {
                let from = stack.iter().position(|n| *n == name).unwrap_or(0);
                let mut cycle: Vec<String> = stack[from..].iter().map(|s| s.to_string()).collect();
                cycle.push(name.to_string());
                return Err(ExtError::Cycle { cycle });
            }
            None => {}
        }
        let Some(body) = bodies.get(name) else {
            return Ok(());
        };
        marks.insert(name, Mark::Active);
        stack.push(name);
        for call in body.calls() {
            if let ConditionExpr::User { name: callee, .. } = call {
                if let Some((key, _)) = bodies.get_key_value(callee.as_str()) {
                    visit(key, bodies, marks, stack)?;
                }
            }
        }
        stack.pop();
        marks.insert(name, Mark::Done);
        Ok(())
    }

    let mut marks = HashMap::new();
    for e in exts {
        if bodies.contains_key(e.name.as_str()) {
            visit(&e.name, &bodies, &mut marks, &mut Vec::new())?;
        }
    }
    Ok(())
}
