//! Minimal ORM mapping file: one mapping per line.
//!
//! ```text
//! # comment
//! class de.test.ECU -> table ECU
//! property de.TroubleCd#name -> column NAME
//! ```

use thiserror::Error;

use crate::lex::is_identifier;
use crate::model::QualifiedName;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrmMapping {
    Class { class: QualifiedName, table: String },
    Property { attribute: QualifiedName, column: String },
}

impl OrmMapping {
    pub fn element(&self) -> &QualifiedName {
        match self {
            OrmMapping::Class { class, .. } => class,
            OrmMapping::Property { attribute, .. } => attribute,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrmEntry {
    pub mapping: OrmMapping,
    /// 1-based.
    pub line: usize,
    /// The source line, trimmed.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrmMappingFile {
    pub entries: Vec<OrmEntry>,
}

impl OrmMappingFile {
    pub fn entry_for(&self, element: &QualifiedName) -> Option<&OrmEntry> {
        self.entries.iter().find(|e| e.mapping.element() == element)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct OrmError {
    pub line: usize,
    pub message: String,
}

pub fn parse_orm_file(text: &str) -> Result<OrmMappingFile, OrmError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| OrmError { line, message };
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        let [kind, qname, "->", target_kind, target] = words[..] else {
            return Err(err(format!(
                "expected `class <qname> -> table <IDENT>` or `property <qname#attr> -> column <IDENT>`, found `{trimmed}`"
            )));
        };
        if !is_identifier(target) {
            return Err(err(format!("`{target}` is not an identifier")));
        }
        let qname: QualifiedName = qname.parse().map_err(|e| err(format!("{e}")))?;
        let mapping = match (kind, target_kind, qname.is_attribute()) {
            ("class", "table", false) => OrmMapping::Class {
                class: qname,
                table: target.into(),
            },
            ("property", "column", true) => OrmMapping::Property {
                attribute: qname,
                column: target.into(),
            },
            ("class", "table", true) => return Err(err("a class mapping names a class, not an attribute".into())),
            ("property", "column", false) => {
                return Err(err("a property mapping names an attribute (`Class#attr`)".into()))
            }
            _ => return Err(err(format!("unknown mapping `{kind} ... -> {target_kind}`"))),
        };
        if entries.iter().any(|e: &OrmEntry| e.mapping.element() == mapping.element()) {
            return Err(err(format!("`{}` is mapped twice", mapping.element())));
        }
        entries.push(OrmEntry {
            mapping,
            line,
            text: trimmed.to_string(),
        });
    }
    Ok(OrmMappingFile { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        let f = parse_orm_file("class de.test.ECU -> table ECU").unwrap();
        assert_eq!(
            f.entries,
            vec![OrmEntry {
                mapping: OrmMapping::Class {
                    class: "de.test.ECU".parse().unwrap(),
                    table: "ECU".into()
                },
                line: 1,
                text: "class de.test.ECU -> table ECU".into()
            }]
        );
        let f = parse_orm_file("# mapping\n\n  property de.TroubleCd#name -> column NAME  \n").unwrap();
        assert_eq!(f.entries.len(), 1);
        assert_eq!(f.entries[0].line, 3);
        assert_eq!(f.entries[0].text, "property de.TroubleCd#name -> column NAME");
        assert!(matches!(f.entries[0].mapping, OrmMapping::Property { ref column, .. } if column == "NAME"));
        assert!(parse_orm_file("").unwrap().entries.is_empty());
    }

    #[test]
    fn malformed_lines() {
        for (src, line) in [
            ("class de.X -> table", 1),
            ("\nclass de.X => table X", 2),
            ("class de.X#a -> table X", 1),
            ("property de.X -> column X", 1),
            ("class de.X -> column X", 1),
            ("class de.X -> table 9x", 1),
            ("class de..X -> table X", 1),
            ("class de.X -> table X\nclass de.X -> table Y", 2),
        ] {
            let err = parse_orm_file(src).unwrap_err();
            assert_eq!(err.line, line, "{src}: {err}");
        }
    }

    #[test]
    fn lookup() {
        let f = parse_orm_file("class a.B -> table B\nproperty a.B#c -> column C").unwrap();
        assert_eq!(f.entry_for(&"a.B#c".parse().unwrap()).unwrap().line, 2);
        assert!(f.entry_for(&"a.B#d".parse().unwrap()).is_none());
    }
}
