use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lex::is_identifier;

/// Dotted path to a package, class or association, optionally followed by
/// `#attr` to address an attribute of a class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QualifiedName {
    segments: Vec<String>,
    attribute: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed qualified name `{text}`: {reason}")]
pub struct QualifiedNameError {
    pub text: String,
    pub reason: &'static str,
}

impl QualifiedName {
    /// Panics if `segments` is empty. Callers build names from parsed
    /// identifiers, so an empty path is a programming error.
    pub fn new(segments: Vec<String>) -> Self {
        assert!(!segments.is_empty(), "qualified name needs a segment");
        Self {
            segments,
            attribute: None,
        }
    }

    pub fn simple(name: impl Into<String>) -> Self {
        Self::new(vec![name.into()])
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }

    pub fn attribute(&self) -> Option<&str> {
        self.attribute.as_deref()
    }

    pub fn is_attribute(&self) -> bool {
        self.attribute.is_some()
    }

    /// Last component: the attribute name for attribute refs, otherwise the
    /// final segment.
    pub fn simple_name(&self) -> &str {
        match &self.attribute {
            Some(a) => a,
            None => self.segments.last().expect("non-empty"),
        }
    }

    /// The owner: the class for an attribute ref, the enclosing package for
    /// a class or package, `None` at top level.
    pub fn container(&self) -> Option<QualifiedName> {
        if self.attribute.is_some() {
            return Some(Self::new(self.segments.clone()));
        }
        if self.segments.len() > 1 {
            Some(Self::new(self.segments[..self.segments.len() - 1].to_vec()))
        } else {
            None
        }
    }

    pub fn child(&self, name: impl Into<String>) -> Self {
        assert!(self.attribute.is_none());
        let mut segments = self.segments.clone();
        segments.push(name.into());
        Self::new(segments)
    }

    pub fn with_attribute(&self, attr: impl Into<String>) -> Self {
        Self {
            segments: self.segments.clone(),
            attribute: Some(attr.into()),
        }
    }

    /// `container` joined with `name`; a `None` container means top level.
    pub fn join(container: Option<&QualifiedName>, name: &str) -> Self {
        match container {
            Some(c) => c.child(name),
            None => Self::simple(name),
        }
    }

    /// Same element name placed under a different owner.
    pub fn rehomed(&self, container: Option<&QualifiedName>) -> Self {
        match &self.attribute {
            Some(a) => container
                .expect("attribute needs an owning class")
                .with_attribute(a.clone()),
            None => Self::join(container, self.simple_name()),
        }
    }

    /// Same owner, different last component.
    pub fn renamed(&self, name: &str) -> Self {
        match &self.attribute {
            Some(_) => self.with_attribute(name),
            None => Self::join(self.container().as_ref(), name),
        }
    }
}

impl fmt::Display for QualifiedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.segments.join("."))?;
        if let Some(a) = &self.attribute {
            write!(f, "#{a}")?;
        }
        Ok(())
    }
}

impl FromStr for QualifiedName {
    type Err = QualifiedNameError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason| QualifiedNameError {
            text: text.to_string(),
            reason,
        };
        let (path, attribute) = match text.split_once('#') {
            Some((p, a)) => {
                if a.contains('#') {
                    return Err(err("more than one `#`"));
                }
                if !is_identifier(a) {
                    return Err(err("attribute part is not an identifier"));
                }
                (p, Some(a.to_string()))
            }
            None => (text, None),
        };
        let segments: Vec<String> = path.split('.').map(str::to_string).collect();
        if segments.iter().any(|s| !is_identifier(s)) {
            return Err(err("segments must be identifiers"));
        }
        Ok(Self {
            segments,
            attribute,
        })
    }
}

impl Serialize for QualifiedName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QualifiedName {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
