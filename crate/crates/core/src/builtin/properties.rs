use indexmap::IndexMap;
use thiserror::Error;

/// `key=value` lines; `#` and `!` start comments. Insertion order is kept.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PropertyFile {
    pub entries: IndexMap<String, String>,
    /// File name shown in hints, e.g. `core.properties`.
    pub name: Option<String>,
}

impl PropertyFile {
    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct PropertyError {
    pub line: usize,
    pub message: String,
}

pub fn parse_property_file(text: &str) -> Result<PropertyFile, PropertyError> {
    let mut entries = IndexMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('!') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(PropertyError {
                line,
                message: format!("expected `key=value`, found `{trimmed}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(PropertyError {
                line,
                message: "empty key".into(),
            });
        }
        if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(PropertyError {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(PropertyFile { entries, name: None })
}

/// Keys an added class needs: its simple name in upper case plus `suffix`.
pub fn property_key(class_simple_name: &str, suffix: &str) -> String {
    format!("{}{suffix}", class_simple_name.to_uppercase())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse() {
        let f = parse_property_file("# labels\nECU = Control unit\n! other\nECUS=Control units\n\n").unwrap();
        assert_eq!(f.entries.keys().collect::<Vec<_>>(), ["ECU", "ECUS"]);
        assert_eq!(f.entries["ECU"], "Control unit");
        assert!(f.contains("ECUS") && !f.contains("X"));
        assert!(parse_property_file("").unwrap().entries.is_empty());
        assert_eq!(parse_property_file("a=1\nb\n").unwrap_err().line, 2);
        assert_eq!(parse_property_file("a=1\na=2\n").unwrap_err().line, 2);
        assert_eq!(parse_property_file(" = 1").unwrap_err().line, 1);
    }

    #[test]
    fn keys() {
        assert_eq!(property_key("ECU", ""), "ECU");
        assert_eq!(property_key("ECU", "S"), "ECUS");
        assert_eq!(property_key("TroubleCd", "S"), "TROUBLECDS");
    }
}
