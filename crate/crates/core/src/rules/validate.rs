use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::ast::{ConditionExpr, RuleSet};
use super::ext::{ExtensionBody, ExtensionDecl, PROVIDERS};

/// Placeholders every evaluation context can fill without declarations.
pub const BUILTIN_PLACEHOLDERS: &[&str] = &["oldName", "newName"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub arity: usize,
    /// The single argument must compile as a regular expression.
    pub regex: bool,
}

impl Signature {
    pub const fn args(arity: usize) -> Self {
        Self { arity, regex: false }
    }

    pub const fn regex() -> Self {
        Self { arity: 1, regex: true }
    }
}

/// Everything a rule set may refer to besides its own extension file.
#[derive(Debug, Clone, Default)]
pub struct KnownNames {
    pub predefined: BTreeMap<String, Signature>,
    /// Conditions implemented natively (registered, not declared).
    pub conditions: BTreeMap<String, Signature>,
    /// Placeholders implemented natively.
    pub placeholders: BTreeSet<String>,
    pub providers: BTreeMap<String, usize>,
}

impl KnownNames {
    pub fn new(predefined: impl IntoIterator<Item = (String, Signature)>) -> Self {
        Self {
            predefined: predefined.into_iter().collect(),
            providers: PROVIDERS.iter().map(|(p, n)| (p.to_string(), *n)).collect(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Level {
    Warning,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagCode {
    UnresolvedCondition,
    UnresolvedPlaceholder,
    UnknownPredefined,
    UnknownProvider,
    Arity,
    BadRegex,
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagCode::UnresolvedCondition => "UNRESOLVED_CONDITION",
            DiagCode::UnresolvedPlaceholder => "UNRESOLVED_PLACEHOLDER",
            DiagCode::UnknownPredefined => "UNKNOWN_PREDEFINED",
            DiagCode::UnknownProvider => "UNKNOWN_PROVIDER",
            DiagCode::Arity => "ARITY",
            DiagCode::BadRegex => "BAD_REGEX",
        })
    }
}

impl DiagCode {
    pub fn level(self) -> Level {
        match self {
            DiagCode::UnresolvedCondition | DiagCode::UnresolvedPlaceholder => Level::Warning,
            _ => Level::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagCode,
    /// `rule "X", entry 2` or `extension Y`.
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn level(&self) -> Level {
        self.code.level()
    }

    pub fn is_error(&self) -> bool {
        self.level() == Level::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level() {
            Level::Warning => "warning",
            Level::Error => "error",
        };
        write!(f, "{level} {}: {}: {}", self.code, self.location, self.message)
    }
}

/// Checks every name a rule set uses against the extension file and the
/// known catalogs. An empty result means clean.
pub fn validate(rs: &RuleSet, exts: &[ExtensionDecl], known: &KnownNames) -> Vec<Diagnostic> {
    let declared_conditions: HashMap<&str, &ConditionExpr> = exts
        .iter()
        .filter_map(|e| match &e.body {
            ExtensionBody::Condition(c) => Some((e.name.as_str(), c)),
            ExtensionBody::Placeholder { .. } => None,
        })
        .collect();
    let declared_placeholders: BTreeSet<&str> = exts
        .iter()
        .filter(|e| matches!(e.body, ExtensionBody::Placeholder { .. }))
        .map(|e| e.name.as_str())
        .collect();

    let mut out = Vec::new();
    let mut push = |code, location: &str, message: String| {
        out.push(Diagnostic {
            code,
            location: location.to_string(),
            message,
        })
    };

    let check_condition = |expr: &ConditionExpr, location: &str, push: &mut dyn FnMut(DiagCode, &str, String)| {
        for call in expr.calls() {
            match call {
                ConditionExpr::Predefined { name, args } => match known.predefined.get(name) {
                    None => push(
                        DiagCode::UnknownPredefined,
                        location,
                        format!("unknown predefined condition `pc.{name}`"),
                    ),
                    Some(sig) => check_signature(&format!("pc.{name}"), *sig, args, location, push),
                },
                ConditionExpr::User { name, args } => {
                    if declared_conditions.contains_key(name.as_str()) {
                        check_signature(name, Signature::args(0), args, location, push);
                    } else if let Some(sig) = known.conditions.get(name) {
                        check_signature(name, *sig, args, location, push);
                    } else {
                        push(
                            DiagCode::UnresolvedCondition,
                            location,
                            format!("condition `{name}` is neither declared nor registered"),
                        );
                    }
                }
                _ => unreachable!("calls() yields only calls"),
            }
        }
    };

    for rule in &rs.rules {
        for (i, entry) in rule.entries.iter().enumerate() {
            let location = format!("rule \"{}\", entry {}", rule.name, i + 1);
            check_condition(&entry.condition, &location, &mut push);
            for p in entry.hint.placeholders() {
                let resolved = if p.contains('.') {
                    known.providers.get(p) == Some(&0)
                } else {
                    BUILTIN_PLACEHOLDERS.contains(&p)
                        || declared_placeholders.contains(p)
                        || known.placeholders.contains(p)
                };
                if !resolved {
                    push(
                        DiagCode::UnresolvedPlaceholder,
                        &location,
                        format!("placeholder `{{{p}}}` has no provider"),
                    );
                }
            }
        }
    }
    for e in exts {
        let location = format!("extension {}", e.name);
        match &e.body {
            ExtensionBody::Condition(c) => check_condition(c, &location, &mut push),
            ExtensionBody::Placeholder { provider, args } => match known.providers.get(provider) {
                None => push(
                    DiagCode::UnknownProvider,
                    &location,
                    format!("unknown provider `{provider}`"),
                ),
                Some(&n) => check_signature(provider, Signature::args(n), args, &location, &mut push),
            },
        }
    }
    out
}

fn check_signature(
    name: &str,
    sig: Signature,
    args: &[String],
    location: &str,
    push: &mut dyn FnMut(DiagCode, &str, String),
) {
    if args.len() != sig.arity {
        push(
            DiagCode::Arity,
            location,
            format!("`{name}` takes {} argument(s), got {}", sig.arity, args.len()),
        );
    } else if sig.regex {
        if let Err(e) = regex::Regex::new(&args[0]) {
            push(DiagCode::BadRegex, location, format!("`{name}`: {e}"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{parse_extensions, parse_rules};

    fn known() -> KnownNames {
        KnownNames::new([
            ("addedClass".to_string(), Signature::args(0)),
            ("addedPersistentClass".to_string(), Signature::args(0)),
            ("renamedPersistentAttribute".to_string(), Signature::args(0)),
            ("elementHasStereotype".to_string(), Signature::args(1)),
            ("elementNameMatches".to_string(), Signature::regex()),
        ])
    }

    const ORM_RULE_TEXT: &str = r#"impactRule "ORM File Analysis" {
  description = "This rule checks ..."
  impact {
    pc.addedPersistentClass() && addedActiveClass() =>
    "Add entry to mapping file for new class."
    pc.renamedPersistentAttribute() => "Rename entry in
    mapping file. Excerpt from file: {ORMFileExcerpt}"
  }
}"#;

    #[test]
    fn unresolved_names_are_warnings() {
        let rs = parse_rules(ORM_RULE_TEXT).unwrap();
        let d = validate(&rs, &[], &known());
        let codes: Vec<DiagCode> = d.iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![DiagCode::UnresolvedCondition, DiagCode::UnresolvedPlaceholder]);
        assert!(d.iter().all(|d| !d.is_error()));
    }

    #[test]
    fn resolved_by_extensions() {
        let rs = parse_rules(ORM_RULE_TEXT).unwrap();
        let exts = parse_extensions(
            r#"define condition addedActiveClass = pc.addedClass() && pc.elementHasStereotype("active");
               define placeholder ORMFileExcerpt = orm.excerpt();"#,
        )
        .unwrap();
        assert_eq!(validate(&rs, &exts, &known()), vec![]);
    }

    #[test]
    fn resolved_by_registry() {
        let rs = parse_rules(ORM_RULE_TEXT).unwrap();
        let mut k = known();
        k.conditions.insert("addedActiveClass".into(), Signature::args(0));
        k.placeholders.insert("ORMFileExcerpt".into());
        assert_eq!(validate(&rs, &[], &k), vec![]);
    }

    #[test]
    fn errors() {
        let rs = parse_rules(
            r#"impactRule "R" { description = "d" impact {
                pc.addedWidget() => "a"
                pc.addedClass("x") => "b"
                pc.elementNameMatches("(") => "c"
                pc.elementHasStereotype() => "d {element.name} {oldName} {nope.path}"
            } }"#,
        )
        .unwrap();
        let d = validate(&rs, &[], &known());
        let codes: Vec<DiagCode> = d.iter().map(|d| d.code).collect();
        assert_eq!(
            codes,
            vec![
                DiagCode::UnknownPredefined,
                DiagCode::Arity,
                DiagCode::BadRegex,
                DiagCode::Arity,
                DiagCode::UnresolvedPlaceholder
            ]
        );
        assert_eq!(d[0].location, "rule \"R\", entry 1");
        assert!(d[0].to_string().starts_with("error UNKNOWN_PREDEFINED"), "{}", d[0]);
    }

    #[test]
    fn extension_bodies_are_checked() {
        let exts = parse_extensions(
            r#"define condition a = pc.addedWidget() || b("x");
               define condition b = pc.addedClass();
               define placeholder P = property.key();"#,
        )
        .unwrap();
        let codes: Vec<DiagCode> = validate(&RuleSet::default(), &exts, &known())
            .iter()
            .map(|d| d.code)
            .collect();
        assert_eq!(codes, vec![DiagCode::UnknownPredefined, DiagCode::Arity, DiagCode::Arity]);
    }
}
