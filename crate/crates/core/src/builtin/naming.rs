use std::fmt;
use std::str::FromStr;

/// How model names map to table and column identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NamingConvention {
    /// `TroubleCd` becomes `TROUBLE_CD`.
    #[default]
    UpperSnake,
    AsIs,
    /// `TroubleCd` becomes `trouble_cd`.
    LowerSnake,
}

impl NamingConvention {
    pub fn apply(self, name: &str) -> String {
        match self {
            NamingConvention::AsIs => name.to_string(),
            NamingConvention::UpperSnake => snake(name).to_uppercase(),
            NamingConvention::LowerSnake => snake(name).to_lowercase(),
        }
    }
}

/// Inserts `_` at every lower-to-upper case boundary.
fn snake(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 4);
    let mut prev_lower = false;
    for c in name.chars() {
        if c.is_uppercase() && prev_lower {
            out.push('_');
        }
        prev_lower = c.is_lowercase();
        out.push(c);
    }
    out
}

impl FromStr for NamingConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "upper_snake" => Ok(Self::UpperSnake),
            "as_is" => Ok(Self::AsIs),
            "lower_snake" => Ok(Self::LowerSnake),
            _ => Err(format!("unknown naming convention `{s}` (expected upper_snake, as_is or lower_snake)")),
        }
    }
}

impl fmt::Display for NamingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UpperSnake => "upper_snake",
            Self::AsIs => "as_is",
            Self::LowerSnake => "lower_snake",
        })
    }
}

pub fn to_table_name(class_simple_name: &str, naming: NamingConvention) -> String {
    naming.apply(class_simple_name)
}

pub fn to_column_name(attr_name: &str, naming: NamingConvention) -> String {
    naming.apply(attr_name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let u = NamingConvention::UpperSnake;
        assert_eq!(to_table_name("ECU", u), "ECU");
        assert_eq!(to_table_name("TroubleCd", u), "TROUBLE_CD");
        assert_eq!(to_column_name("name", u), "NAME");
        assert_eq!(to_column_name("newName", u), "NEW_NAME");
        assert_eq!(to_table_name("TroubleCd", NamingConvention::LowerSnake), "trouble_cd");
        assert_eq!(to_table_name("TroubleCd", NamingConvention::AsIs), "TroubleCd");
    }

    proptest! {
        #[test]
        fn idempotent(name in "[A-Za-z][A-Za-z0-9_]{0,15}") {
            for n in [NamingConvention::UpperSnake, NamingConvention::AsIs, NamingConvention::LowerSnake] {
                let once = n.apply(&name);
                prop_assert_eq!(n.apply(&once), once);
            }
        }
    }
}
