//! Rule-grouped checklist rendering.
//!
//! Short text form, one section per rule:
//!
//! ```text
//! ORM file analysis:
//! =====
//! - Add entry to mapping file for new class. (Causing model change: Added class 'de.test.ECU')
//!
//! Property file analysis:
//! =====
//! Add these entries to the property file core.properties:
//!   - ECU (Causing model change: Added class 'de.test.ECU')
//!   - ECUS (Causing model change: Added class 'de.test.ECU')
//! ```
//!
//! A hint whose text spans several lines is split at its first newline; the
//! first line becomes a heading shared by consecutive hints with the same
//! heading, the rest is an indented bullet. The indent keeps a plain hint
//! that follows a group distinguishable from a member of the group.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::ChecklistHint;
use crate::rules::{Probability, RuleSet, Severity};

pub const SEPARATOR: &str = "=====";
pub const UNRESOLVED_MARKER: &str = "[unresolved]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderMode {
    #[default]
    Short,
    Detailed,
}

impl FromStr for RenderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "short" => Ok(RenderMode::Short),
            "detailed" => Ok(RenderMode::Detailed),
            _ => Err(format!("unknown mode `{s}`, expected short or detailed")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistSection {
    pub rule: String,
    pub description: String,
    pub severity: Option<Severity>,
    pub probability: Option<Probability>,
    pub relevant_for: Option<String>,
    pub hints: Vec<ChecklistHint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Checklist {
    pub sections: Vec<ChecklistSection>,
}

impl Checklist {
    /// Groups hints into sections in rule set order. Hint order inside a
    /// section is kept as given. Hints naming a rule the set does not contain
    /// get a section after the known ones, in order of first appearance.
    pub fn build(rs: &RuleSet, hints: Vec<ChecklistHint>) -> Self {
        let mut sections: Vec<ChecklistSection> = rs
            .rules
            .iter()
            .map(|r| ChecklistSection {
                rule: r.name.clone(),
                description: r.description.clone(),
                severity: r.severity,
                probability: r.probability,
                relevant_for: r.relevant_for.clone(),
                hints: Vec::new(),
            })
            .collect();
        for h in hints {
            let i = match sections.iter().position(|s| s.rule == h.rule) {
                Some(i) => i,
                None => {
                    sections.push(ChecklistSection {
                        rule: h.rule.clone(),
                        description: String::new(),
                        severity: h.severity,
                        probability: h.probability,
                        relevant_for: h.relevant_for.clone(),
                        hints: Vec::new(),
                    });
                    sections.len() - 1
                }
            };
            sections[i].hints.push(h);
        }
        sections.retain(|s| !s.hints.is_empty());
        Checklist { sections }
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn hint_count(&self) -> usize {
        self.sections.iter().map(|s| s.hints.len()).sum()
    }
}

fn or_dash(v: Option<&str>) -> &str {
    v.unwrap_or("-")
}

pub fn render_text(c: &Checklist, mode: RenderMode) -> String {
    let mut out = String::new();
    for (i, s) in c.sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "{}:", s.rule);
        let _ = writeln!(out, "{SEPARATOR}");
        if mode == RenderMode::Detailed {
            let _ = writeln!(out, "Description: {}", s.description);
            let _ = writeln!(out, "Severity: {}", or_dash(s.severity.map(|v| v.as_str())));
            let _ = writeln!(out, "Probability: {}", or_dash(s.probability.map(|v| v.as_str())));
            let _ = writeln!(out, "Relevant for: {}", or_dash(s.relevant_for.as_deref()));
        }
        let mut heading: Option<&str> = None;
        for h in &s.hints {
            let (head, body) = match h.text.split_once('\n') {
                Some((head, body)) => (Some(head), body),
                None => (None, h.text.as_str()),
            };
            if head.is_some() && head != heading {
                let _ = writeln!(out, "{}", head.unwrap_or_default());
            }
            heading = head;
            let indent = if head.is_some() { "  " } else { "" };
            let body = body.replace('\n', &format!("\n{indent}  "));
            let _ = writeln!(out, "{indent}- {body} (Causing model change: {})", h.cause.description());
            if mode == RenderMode::Detailed && h.unresolved {
                let _ = writeln!(out, "  {UNRESOLVED_MARKER}");
            }
        }
    }
    out
}

pub fn render_structured(c: &Checklist) -> String {
    let mut s = serde_json::to_string_pretty(c).expect("checklists serialize");
    s.push('\n');
    s
}

pub fn parse_structured(text: &str) -> Result<Checklist, serde_json::Error> {
    serde_json::from_str(text)
}
