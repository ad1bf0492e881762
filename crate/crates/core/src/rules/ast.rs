use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Minor,
    Normal,
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Probability {
    Low,
    Medium,
    High,
}

macro_rules! keyword_enum {
    ($ty:ident, $valid:literal, $($variant:ident => $word:literal),+) => {
        impl $ty {
            pub const VALID: &'static str = $valid;

            pub fn as_str(self) -> &'static str {
                match self {
                    $($ty::$variant => $word),+
                }
            }
        }

        impl FromStr for $ty {
            type Err = ();
            fn from_str(s: &str) -> Result<Self, ()> {
                match s {
                    $($word => Ok($ty::$variant),)+
                    _ => Err(()),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyword_enum!(Severity, "minor, normal, critical",
    Minor => "minor", Normal => "normal", Critical => "critical");
keyword_enum!(Probability, "low, medium, high",
    Low => "low", Medium => "medium", High => "high");

/// Boolean condition over the current difference.
///
/// `Predefined` names are stored without the `pc.` prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConditionExpr {
    And(Box<ConditionExpr>, Box<ConditionExpr>),
    Or(Box<ConditionExpr>, Box<ConditionExpr>),
    Not(Box<ConditionExpr>),
    Predefined { name: String, args: Vec<String> },
    User { name: String, args: Vec<String> },
}

impl ConditionExpr {
    pub fn predefined(name: &str) -> Self {
        ConditionExpr::Predefined {
            name: name.into(),
            args: Vec::new(),
        }
    }

    pub fn user(name: &str) -> Self {
        ConditionExpr::User {
            name: name.into(),
            args: Vec::new(),
        }
    }

    pub fn and(a: Self, b: Self) -> Self {
        ConditionExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        ConditionExpr::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        ConditionExpr::Not(Box::new(a))
    }

    /// Calls in left-to-right source order.
    pub fn calls(&self) -> Vec<&ConditionExpr> {
        let mut out = Vec::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls<'a>(&'a self, out: &mut Vec<&'a ConditionExpr>) {
        match self {
            ConditionExpr::And(a, b) | ConditionExpr::Or(a, b) => {
                a.collect_calls(out);
                b.collect_calls(out);
            }
            ConditionExpr::Not(a) => a.collect_calls(out),
            call => out.push(call),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Segment {
    Literal(String),
    Placeholder(String),
}

/// Hint text with `{name}` slots. Segments are kept normalized: no empty
/// literals and no two literals in a row, so structural equality is textual
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HintTemplate {
    segments: Vec<Segment>,
}

impl HintTemplate {
    pub fn new(segments: impl IntoIterator<Item = Segment>) -> Self {
        let mut out: Vec<Segment> = Vec::new();
        for s in segments {
            match (out.last_mut(), s) {
                (_, Segment::Literal(t)) if t.is_empty() => {}
                (Some(Segment::Literal(prev)), Segment::Literal(t)) => prev.push_str(&t),
                (_, s) => out.push(s),
            }
        }
        Self { segments: out }
    }

    pub fn literal(text: &str) -> Self {
        Self::new([Segment::Literal(text.into())])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn placeholders(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Placeholder(p) => Some(p.as_str()),
            Segment::Literal(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpactEntry {
    pub condition: ConditionExpr,
    pub hint: HintTemplate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpactRuleDecl {
    pub name: String,
    pub description: String,
    pub severity: Option<Severity>,
    pub probability: Option<Probability>,
    pub relevant_for: Option<String>,
    pub entries: Vec<ImpactEntry>,
}

impl ImpactRuleDecl {
    pub fn new(name: &str, description: &str) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            severity: None,
            probability: None,
            relevant_for: None,
            entries: Vec::new(),
        }
    }

    /// Audience tags from the comma-separated `relevantFor` string.
    pub fn audience(&self) -> Vec<&str> {
        audience_tags(self.relevant_for.as_deref())
    }
}

pub fn audience_tags(relevant_for: Option<&str>) -> Vec<&str> {
    relevant_for
        .map(|s| s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect())
        .unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleSet {
    pub rules: Vec<ImpactRuleDecl>,
}

impl RuleSet {
    pub fn rule(&self, name: &str) -> Option<&ImpactRuleDecl> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}
