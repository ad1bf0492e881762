use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{describe_difference, DiffModel, ModelDifference};

/// Flat export row for one difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffRecord {
    pub kind: String,
    pub subject: String,
    pub old: Option<String>,
    pub new: Option<String>,
    pub counterpart: Option<String>,
    pub description: String,
}

impl From<&ModelDifference> for DiffRecord {
    fn from(d: &ModelDifference) -> Self {
        Self {
            kind: d.kind.to_string(),
            subject: d.subject.qname.to_string(),
            old: d.old_value.clone(),
            new: d.new_value.clone(),
            counterpart: d.counterpart.as_ref().map(|c| c.qname.to_string()),
            description: describe_difference(d),
        }
    }
}

pub const RECORD_HEADER: &str = "# kind\tsubject\told\tnew\tcounterpart\tdescription";

/// Line-oriented export: a header, then one tab-separated record per
/// difference with `-` for absent fields.
pub fn export_records(dm: &DiffModel<'_>) -> String {
    let mut out = String::from(RECORD_HEADER);
    out.push('\n');
    for d in dm.differences() {
        let r = DiffRecord::from(d);
        let dash = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.kind,
            r.subject,
            dash(&r.old),
            dash(&r.new),
            dash(&r.counterpart),
            r.description
        );
    }
    out
}

/// Structured export: a JSON array of [`DiffRecord`] objects.
pub fn export_json(dm: &DiffModel<'_>) -> String {
    let records: Vec<DiffRecord> = dm.differences().iter().map(DiffRecord::from).collect();
    let mut text = serde_json::to_string_pretty(&records).expect("records serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differ::{diff_models, MatchConfig, PresettingSet};
    use crate::model::parse_model;

    #[test]
    fn both_formats() {
        let old = parse_model("package de { package test {} }").unwrap();
        let new = parse_model("package de { package test { class ECU {} } }").unwrap();
        let dm = diff_models(&old, &new, &PresettingSet::default(), &MatchConfig::default()).unwrap();
        assert_eq!(
            export_records(&dm),
            format!("{RECORD_HEADER}\nAddedClass\tde.test.ECU\t-\t-\t-\tAdded class 'de.test.ECU'\n")
        );
        let parsed: Vec<DiffRecord> = serde_json::from_str(&export_json(&dm)).unwrap();
        assert_eq!(parsed, vec![DiffRecord::from(&dm.differences()[0])]);
        assert_eq!(parsed[0].kind, "AddedClass");
    }
}
