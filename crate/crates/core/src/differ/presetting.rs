use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::lex::{is_identifier, quote, Cursor, Pos, SyntaxError};
use crate::model::QualifiedName;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instruction {
    Renamed,
    Moved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresetTarget {
    /// New simple name, same container.
    Name(String),
    /// New container, same simple name.
    Container(QualifiedName),
}

/// A user assertion about how one old-model element maps into the new model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presetting {
    pub instruction: Instruction,
    pub subject: QualifiedName,
    pub target: PresetTarget,
    /// Source line, 0 for programmatically built presettings.
    pub line: usize,
}

impl fmt::Display for Presetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (word, target) = match &self.target {
            PresetTarget::Name(n) => ("renamed", n.clone()),
            PresetTarget::Container(c) => ("moved", c.to_string()),
        };
        write!(
            f,
            "{word} {} to {};",
            quote(&self.subject.to_string(), false),
            quote(&target, false)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PresettingSet {
    items: Vec<Presetting>,
}

impl PresettingSet {
    pub fn new(items: Vec<Presetting>) -> Result<Self, PresettingError> {
        let mut seen = HashSet::new();
        for p in &items {
            if !seen.insert(p.subject.clone()) {
                return Err(PresettingError::DuplicateSubject {
                    subject: p.subject.to_string(),
                    line: p.line,
                });
            }
        }
        Ok(Self { items })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Presetting> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresettingError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("line {line}: `{subject}` already has a presetting")]
    DuplicateSubject { subject: String, line: usize },
    #[error("{pos}: {message}")]
    Malformed { pos: Pos, message: String },
}

/// Parses a `.ups` file: `('renamed' | 'moved') STRING 'to' STRING ';'`.
pub fn parse_presettings(text: &str) -> Result<PresettingSet, PresettingError> {
    let mut cur = Cursor::new(text)?;
    let mut items = Vec::new();
    while !cur.at_eof() {
        let pos = cur.pos();
        let instruction = if cur.is_keyword("renamed") {
            Instruction::Renamed
        } else if cur.is_keyword("moved") {
            Instruction::Moved
        } else {
            return Err(cur.error("`renamed` or `moved`").into());
        };
        cur.advance();
        let (subject_lit, subject_pos) = cur.expect_str()?;
        cur.expect_keyword("to")?;
        let (target_lit, target_pos) = cur.expect_str()?;
        cur.expect_sym(";")?;

        let subject: QualifiedName =
            subject_lit
                .text()
                .parse()
                .map_err(|e: crate::model::QualifiedNameError| PresettingError::Malformed {
                    pos: subject_pos,
                    message: e.to_string(),
                })?;
        let target_text = target_lit.text();
        let target = match instruction {
            Instruction::Renamed => {
                if !is_identifier(&target_text) {
                    return Err(PresettingError::Malformed {
                        pos: target_pos,
                        message: format!("rename target `{target_text}` must be a bare identifier"),
                    });
                }
                PresetTarget::Name(target_text)
            }
            Instruction::Moved => {
                let container: QualifiedName =
                    target_text.parse().map_err(|e: crate::model::QualifiedNameError| {
                        PresettingError::Malformed {
                            pos: target_pos,
                            message: e.to_string(),
                        }
                    })?;
                if container.is_attribute() {
                    return Err(PresettingError::Malformed {
                        pos: target_pos,
                        message: "move target must be a package or class, not an attribute".into(),
                    });
                }
                PresetTarget::Container(container)
            }
        };
        items.push(Presetting {
            instruction,
            subject,
            target,
            line: pos.line,
        });
    }
    PresettingSet::new(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trouble_code_rename() {
        let ps = parse_presettings(r#"renamed "de.TroubleCd#name" to "newName";"#).unwrap();
        let p = ps.iter().next().unwrap();
        assert_eq!(p.instruction, Instruction::Renamed);
        assert_eq!(p.subject.to_string(), "de.TroubleCd#name");
        assert_eq!(p.target, PresetTarget::Name("newName".into()));
        assert_eq!(ps.len(), 1);
    }

    #[test]
    fn move_to_container() {
        let ps = parse_presettings(r#"moved "de.TroubleCd" to "de.codes";"#).unwrap();
        let p = ps.iter().next().unwrap();
        assert_eq!(p.instruction, Instruction::Moved);
        assert_eq!(p.subject, "de.TroubleCd".parse().unwrap());
        assert_eq!(p.target, PresetTarget::Container("de.codes".parse().unwrap()));
    }

    #[test]
    fn empty_file() {
        assert!(parse_presettings("").unwrap().is_empty());
        assert!(parse_presettings("// only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let dup = "renamed \"a.B\" to \"C\";\nmoved \"a.B\" to \"x\";";
        assert_eq!(
            parse_presettings(dup).unwrap_err(),
            PresettingError::DuplicateSubject {
                subject: "a.B".into(),
                line: 2
            }
        );
        assert!(matches!(
            parse_presettings(r#"renamed "a..B" to "C";"#),
            Err(PresettingError::Malformed { .. })
        ));
        assert!(matches!(
            parse_presettings(r#"renamed "a.B" to "x.C";"#),
            Err(PresettingError::Malformed { .. })
        ));
        assert!(matches!(
            parse_presettings(r#"renamed "a.B" to "C""#),
            Err(PresettingError::Syntax(_))
        ));
        assert!(matches!(
            parse_presettings(r#"deleted "a.B";"#),
            Err(PresettingError::Syntax(_))
        ));
    }

    #[test]
    fn display_reparses() {
        let text = "renamed \"de.TroubleCd#name\" to \"newName\";\nmoved \"de.X\" to \"de.y\";";
        let ps = parse_presettings(text).unwrap();
        let printed: Vec<String> = ps.iter().map(ToString::to_string).collect();
        assert_eq!(printed.join("\n"), text);
    }
}
