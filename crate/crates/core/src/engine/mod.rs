//! Rule evaluation: every rule against every difference, in that nesting
//! order, producing checklist hints.
//!
//! Conditions evaluate in three-valued logic. A name that resolves nowhere is
//! `Unresolved`; `&&`/`||` short-circuit left to right and propagate
//! `Unresolved` only when the other operand cannot decide the result. What
//! happens with an unresolved outcome is the caller's [`UnresolvedPolicy`].

mod predefined;
mod registry;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::differ::{DiffModel, ModelDifference};
use crate::model::{Element, ModelIndex};
use crate::rules::{audience_tags, ConditionExpr, HintTemplate, ImpactRuleDecl, Probability, RuleSet, Segment, Severity};

pub use predefined::{eval_predefined, kind_conditions, predefined_catalog};
pub use registry::{ExtensionRegistry, NativeCondition, NativePlaceholder};

/// Declared conditions calling each other deeper than this are treated as
/// runaway recursion (only possible across separately declared files).
const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnresolvedPolicy {
    /// Abort evaluation.
    Fail,
    /// Unresolved conditions are false; unresolved placeholders expand to
    /// nothing.
    False,
    /// Keep going and mark affected hints.
    #[default]
    Flag,
}

impl FromStr for UnresolvedPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fail" => Ok(Self::Fail),
            "false" => Ok(Self::False),
            "flag" => Ok(Self::Flag),
            _ => Err(format!("unknown unresolved policy `{s}` (expected fail, false or flag)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Stereotype the `*Persistent*` conditions test for.
    pub persistent_stereotype: String,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            persistent_stereotype: "persistent".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Unresolved,
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unresolved {what} `{name}`")]
    Unresolved { what: &'static str, name: String },
    #[error("unknown predefined condition `pc.{0}`")]
    UnknownPredefined(String),
    #[error("`{name}` takes {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("bad regular expression `{pattern}`: {message}")]
    BadRegex { pattern: String, message: String },
    #[error("condition `{0}` nests too deeply (cyclic declarations?)")]
    Recursion(String),
    #[error("rule \"{rule}\", {change}: {source}")]
    InRule {
        rule: String,
        change: String,
        source: Box<EvalError>,
    },
}

impl EvalError {
    /// True when the root cause is an unresolved name, which the command
    /// line reports with its own exit status.
    pub fn is_unresolved(&self) -> bool {
        match self {
            EvalError::Unresolved { .. } => true,
            EvalError::InRule { source, .. } => source.is_unresolved(),
            _ => false,
        }
    }
}

/// Everything a condition or placeholder may look at while one difference
/// is evaluated: the difference itself, the whole difference model and both
/// model versions.
#[derive(Clone, Copy)]
pub struct EvaluationContext<'a, 'm> {
    pub current: &'a ModelDifference,
    pub diff: &'a DiffModel<'m>,
    pub old: &'a ModelIndex<'m>,
    pub new: &'a ModelIndex<'m>,
    pub config: &'a EngineConfig,
    pub registry: &'a ExtensionRegistry,
}

impl<'a, 'm> EvaluationContext<'a, 'm> {
    /// The element the difference is about: looked up in the new model for
    /// additions (including an added stereotype), in the old model otherwise.
    pub fn subject_element(&self) -> Option<Element<'m>> {
        let d = self.current;
        if d.kind.is_addition() {
            self.new.resolve(d.counterpart.as_ref().unwrap_or(&d.subject))
        } else {
            self.old.resolve(&d.subject)
        }
    }

    pub fn subject_has_stereotype(&self, stereotype: &str) -> bool {
        self.subject_element().is_some_and(|e| e.has_stereotype(stereotype))
    }

    pub fn subject_name(&self) -> &'a str {
        self.current.subject.qname.simple_name()
    }

    /// Name before the change: the old value of a rename, else the subject's
    /// own name.
    pub fn old_name(&self) -> String {
        match (&self.current.old_value, self.current.kind.is_rename()) {
            (Some(v), true) => v.clone(),
            _ => self.subject_name().to_string(),
        }
    }

    /// Name after the change: the new value of a rename, else the name of
    /// the new-side element.
    pub fn new_name(&self) -> String {
        let d = self.current;
        match (&d.new_value, d.kind.is_rename()) {
            (Some(v), true) => v.clone(),
            _ => d
                .counterpart
                .as_ref()
                .unwrap_or(&d.subject)
                .qname
                .simple_name()
                .to_string(),
        }
    }
}

pub fn evaluate_condition(
    expr: &ConditionExpr,
    ctx: &EvaluationContext<'_, '_>,
    policy: UnresolvedPolicy,
) -> Result<Truth, EvalError> {
    eval(expr, ctx, policy, 0)
}

fn eval(expr: &ConditionExpr, ctx: &EvaluationContext<'_, '_>, policy: UnresolvedPolicy, depth: usize) -> Result<Truth, EvalError> {
    Ok(match expr {
        ConditionExpr::And(a, b) => match eval(a, ctx, policy, depth)? {
            Truth::False => Truth::False,
            left => match (left, eval(b, ctx, policy, depth)?) {
                (_, Truth::False) => Truth::False,
                (Truth::True, Truth::True) => Truth::True,
                _ => Truth::Unresolved,
            },
        },
        ConditionExpr::Or(a, b) => match eval(a, ctx, policy, depth)? {
            Truth::True => Truth::True,
            left => match (left, eval(b, ctx, policy, depth)?) {
                (_, Truth::True) => Truth::True,
                (Truth::False, Truth::False) => Truth::False,
                _ => Truth::Unresolved,
            },
        },
        ConditionExpr::Not(a) => match eval(a, ctx, policy, depth)? {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unresolved => Truth::Unresolved,
        },
        ConditionExpr::Predefined { name, args } => eval_predefined(name, args, ctx)?.into(),
        ConditionExpr::User { name, args } => {
            if let Some((sig, f)) = ctx.registry.native_condition(name) {
                if args.len() != sig.arity {
                    return Err(EvalError::Arity {
                        name: name.clone(),
                        expected: sig.arity,
                        got: args.len(),
                    });
                }
                f(ctx, args).into()
            } else if let Some(body) = ctx.registry.declared_condition(name) {
                if !args.is_empty() {
                    return Err(EvalError::Arity {
                        name: name.clone(),
                        expected: 0,
                        got: args.len(),
                    });
                }
                if depth >= MAX_DEPTH {
                    return Err(EvalError::Recursion(name.clone()));
                }
                eval(body, ctx, policy, depth + 1)?
            } else {
                match policy {
                    UnresolvedPolicy::Fail => {
                        return Err(EvalError::Unresolved {
                            what: "condition",
                            name: name.clone(),
                        })
                    }
                    UnresolvedPolicy::False => Truth::False,
                    UnresolvedPolicy::Flag => Truth::Unresolved,
                }
            }
        }
    })
}

/// Expanded text plus whether any placeholder stayed unresolved.
pub fn expand_template(
    t: &HintTemplate,
    ctx: &EvaluationContext<'_, '_>,
    policy: UnresolvedPolicy,
) -> Result<(String, bool), EvalError> {
    let mut out = String::new();
    let mut unresolved = false;
    for seg in t.segments() {
        match seg {
            Segment::Literal(text) => out.push_str(text),
            Segment::Placeholder(name) => match resolve_placeholder(name, ctx)? {
                Some(v) => out.push_str(&v),
                None => match policy {
                    UnresolvedPolicy::Fail => {
                        return Err(EvalError::Unresolved {
                            what: "placeholder",
                            name: name.clone(),
                        })
                    }
                    UnresolvedPolicy::False => {}
                    UnresolvedPolicy::Flag => {
                        out.push_str(&format!("{{{name}:unresolved}}"));
                        unresolved = true;
                    }
                },
            },
        }
    }
    Ok((out, unresolved))
}

fn resolve_placeholder(name: &str, ctx: &EvaluationContext<'_, '_>) -> Result<Option<String>, EvalError> {
    let reg = ctx.registry;
    let call = |path: &str, args: &[String]| -> Result<Option<String>, EvalError> {
        match reg.provider(path) {
            Some((arity, f)) if *arity == args.len() => Ok(f(ctx, args)),
            Some((arity, _)) => Err(EvalError::Arity {
                name: path.into(),
                expected: *arity,
                got: args.len(),
            }),
            None => Ok(None),
        }
    };
    if let Some(f) = reg.native_placeholder(name) {
        return Ok(f(ctx, &[]));
    }
    if let Some((provider, args)) = reg.declared_placeholder(name) {
        return call(provider, args);
    }
    match name {
        "oldName" => Ok(Some(ctx.old_name())),
        "newName" => Ok(Some(ctx.new_name())),
        path if path.contains('.') => call(path, &[]),
        _ => Ok(None),
    }
}

/// One actionable step and the change that caused it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistHint {
    pub rule: String,
    pub text: String,
    pub cause: ModelDifference,
    pub severity: Option<Severity>,
    pub probability: Option<Probability>,
    pub relevant_for: Option<String>,
    pub unresolved: bool,
}

/// One hint per entry whose condition holds (or is undecided under
/// [`UnresolvedPolicy::Flag`]), in entry order.
pub fn evaluate_rule(
    rule: &ImpactRuleDecl,
    ctx: &EvaluationContext<'_, '_>,
    policy: UnresolvedPolicy,
) -> Result<Vec<ChecklistHint>, EvalError> {
    let wrap = |e: EvalError| EvalError::InRule {
        rule: rule.name.clone(),
        change: ctx.current.description(),
        source: Box::new(e),
    };
    let mut out = Vec::new();
    for entry in &rule.entries {
        let truth = evaluate_condition(&entry.condition, ctx, policy).map_err(wrap)?;
        if truth == Truth::False {
            continue;
        }
        let (text, unresolved_text) = expand_template(&entry.hint, ctx, policy).map_err(wrap)?;
        // A hint that expands to nothing carries no instruction.
        if text.is_empty() {
            continue;
        }
        out.push(ChecklistHint {
            rule: rule.name.clone(),
            text,
            cause: ctx.current.clone(),
            severity: rule.severity,
            probability: rule.probability,
            relevant_for: rule.relevant_for.clone(),
            unresolved: truth == Truth::Unresolved || unresolved_text,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Filters {
    /// Keep only rules whose `relevantFor` lists this tag.
    pub relevant_for: Option<String>,
    /// Keep only rules at least this severe; no severity counts as normal.
    pub min_severity: Option<Severity>,
}

impl Filters {
    pub fn admits(&self, severity: Option<Severity>, relevant_for: Option<&str>) -> bool {
        let audience_ok = self
            .relevant_for
            .as_deref()
            .is_none_or(|tag| audience_tags(relevant_for).contains(&tag));
        let severity_ok = self
            .min_severity
            .is_none_or(|min| severity.unwrap_or(Severity::Normal) >= min);
        audience_ok && severity_ok
    }

    pub fn admits_rule(&self, rule: &ImpactRuleDecl) -> bool {
        self.admits(rule.severity, rule.relevant_for.as_deref())
    }
}

/// Rule-major, then difference in canonical order, then entry order.
pub fn evaluate_all(
    rs: &RuleSet,
    dm: &DiffModel<'_>,
    reg: &ExtensionRegistry,
    config: &EngineConfig,
    policy: UnresolvedPolicy,
    filters: &Filters,
) -> Result<Vec<ChecklistHint>, EvalError> {
    let old = ModelIndex::new(dm.old);
    let new = ModelIndex::new(dm.new);
    let mut out = Vec::new();
    for rule in rs.rules.iter().filter(|r| filters.admits_rule(r)) {
        for d in dm.differences() {
            let ctx = EvaluationContext {
                current: d,
                diff: dm,
                old: &old,
                new: &new,
                config,
                registry: reg,
            };
            out.extend(evaluate_rule(rule, &ctx, policy)?);
        }
    }
    Ok(out)
}

impl fmt::Display for ChecklistHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (Causing model change: {})", self.text, self.cause.description())
    }
}
