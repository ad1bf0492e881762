use super::*;
use crate::differ::{diff_models, parse_presettings, MatchConfig, PresettingSet};
use crate::model::{parse_model, Model};
use crate::rules::validate;

fn models(old: &str, new: &str) -> (Model, Model) {
    (parse_model(old).unwrap(), parse_model(new).unwrap())
}

fn dm<'m>(old: &'m Model, new: &'m Model, presets: &str) -> DiffModel<'m> {
    diff_models(old, new, &parse_presettings(presets).unwrap(), &MatchConfig::default()).unwrap()
}

fn texts(hints: &[ChecklistHint]) -> Vec<&str> {
    hints.iter().map(|h| h.text.as_str()).collect()
}

const ECU_OLD: &str = "package de { package test { } }";
const ECU_NEW: &str = "package de { package test { <<persistent>> <<active>> class ECU { } } }";

const RENAME_OLD: &str = "package de { <<persistent>> class TroubleCd { <<persistent>> name : String } }";
const RENAME_NEW: &str = "package de { <<persistent>> class TroubleCd { <<persistent>> newName : String } }";
const RENAME_PRESET: &str = r#"renamed "de.TroubleCd#name" to "newName";"#;

#[test]
fn pack_is_well_formed() {
    let rs = builtin_rules();
    let names: Vec<&str> = rs.rules.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, [XML_RULE, SQL_RULE, ORM_RULE, PROPERTY_RULE]);
    assert!(rs.rule(XML_RULE).unwrap().probability == Some(crate::rules::Probability::Medium));
    let reg = builtin_registry(BuiltinConfig::default());
    let diags = validate(&rs, reg.declarations(), &reg.known_names());
    assert!(diags.is_empty(), "{diags:?}");
}

#[test]
fn orm_added_class() {
    let (old, new) = models(ECU_OLD, ECU_NEW);
    let d = dm(&old, &new, "");
    let hints = orm_analysis(&d, None);
    assert_eq!(texts(&hints), ["Add entry to mapping file for new class."]);
    assert_eq!(hints[0].cause.description(), "Added class 'de.test.ECU'");
    assert!(!hints[0].unresolved);
}

#[test]
fn orm_rename_quotes_the_mapping_line() {
    let (old, new) = models(RENAME_OLD, RENAME_NEW);
    let d = dm(&old, &new, RENAME_PRESET);
    let orm = parse_orm_file("class de.TroubleCd -> table TROUBLE_CD\nproperty de.TroubleCd#name -> column NAME\n").unwrap();
    let hints = orm_analysis(&d, Some(&orm));
    assert_eq!(
        texts(&hints),
        ["Rename entry in mapping file. Excerpt from file: property de.TroubleCd#name -> column NAME"]
    );
    let without = orm_analysis(&d, None);
    assert_eq!(
        texts(&without),
        ["Rename entry in mapping file. Excerpt from file: {ORMFileExcerpt:unresolved}"]
    );
    assert!(without[0].unresolved);
}

#[test]
fn orm_deletions_and_empty_diff() {
    let (new, old) = models(ECU_OLD, ECU_NEW);
    let d = dm(&old, &new, "");
    let orm = parse_orm_file("class de.test.ECU -> table ECU").unwrap();
    assert_eq!(
        texts(&orm_analysis(&d, Some(&orm))),
        ["Delete entry from mapping file for deleted class. Excerpt from file: class de.test.ECU -> table ECU"]
    );
    let same = dm(&old, &old, "");
    assert!(orm_analysis(&same, Some(&orm)).is_empty());
}

#[test]
fn orm_hints_ignore_unrelated_differences() {
    let (old, new) = models(ECU_OLD, ECU_NEW);
    let alone = orm_analysis(&dm(&old, &new, ""), None);
    let (old2, new2) = models(
        "package de { package test { } class Other { a : String } }",
        "package de { package test { <<persistent>> <<active>> class ECU { } } class Other { a : Text } class More { } }",
    );
    let mixed = orm_analysis(&dm(&old2, &new2, ""), None);
    assert_eq!(alone, mixed);
}

#[test]
fn property_keys_for_added_class() {
    let (old, new) = models(ECU_OLD, ECU_NEW);
    let d = dm(&old, &new, "");
    let hints = property_key_analysis(&d, None);
    assert_eq!(
        texts(&hints),
        [
            "Add these entries to the property file core.properties:\nECU",
            "Add these entries to the property file core.properties:\nECUS"
        ]
    );
    let mut pf = parse_property_file("ECU=Control unit\nECUS=Control units\n").unwrap();
    assert!(property_key_analysis(&d, Some(&pf)).is_empty());
    pf.entries.shift_remove("ECUS");
    pf.name = Some("labels.properties".into());
    assert_eq!(
        texts(&property_key_analysis(&d, Some(&pf))),
        ["Add these entries to the property file labels.properties:\nECUS"]
    );
}

#[test]
fn property_keys_for_deleted_class() {
    let (new, old) = models(ECU_OLD, ECU_NEW);
    let d = dm(&old, &new, "");
    assert!(property_key_analysis(&d, None).is_empty());
    let pf = parse_property_file("ECU=Control unit\n").unwrap();
    assert_eq!(
        texts(&property_key_analysis(&d, Some(&pf))),
        ["Delete these entries from the property file core.properties:\nECU"]
    );
}

#[test]
fn xml_migration_triggers() {
    let (old, new) = models(RENAME_OLD, RENAME_NEW);
    let hints = xml_migration_analysis(&dm(&old, &new, RENAME_PRESET));
    assert_eq!(
        texts(&hints),
        ["Write a migration that renames the element in stored documents. Proposed stub: <rename-element class=\"de.TroubleCd\" from=\"name\" to=\"newName\"/>"]
    );
    assert!(hints.iter().all(|h| h.probability == Some(crate::rules::Probability::Medium)));

    let (old, new) = models(ECU_OLD, ECU_NEW);
    assert!(xml_migration_analysis(&dm(&old, &new, "")).is_empty());

    let (old, new) = models("package p { class C { a : T [0..*] } }", "package p { class C { a : T [0..1] } }");
    assert_eq!(
        texts(&xml_migration_analysis(&dm(&old, &new, ""))),
        ["Write a migration for stored values outside the new cardinality [0..1]."]
    );
    // widening keeps every stored value valid
    let (old, new) = models("package p { class C { a : T [0..1] } }", "package p { class C { a : T [0..*] } }");
    assert!(xml_migration_analysis(&dm(&old, &new, "")).is_empty());

    let (old, new) = models("package p { class C { a : Integer } }", "package p { class C { a : Long } }");
    assert_eq!(
        texts(&xml_migration_analysis(&dm(&old, &new, ""))),
        ["Write a migration that converts stored values from Integer to Long."]
    );
}

#[test]
fn sql_hints_wrap_scan_hits() {
    let (old, new) = models(RENAME_OLD, RENAME_NEW);
    let d = dm(&old, &new, RENAME_PRESET);
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("q.sql"), "SELECT NAME FROM TROUBLE_CD\n").unwrap();
    let scan = sql_scan(&d, dir.path(), &ScanOptions::default()).unwrap();
    let hints = sql_query_analysis(&d, &scan, Some(dir.path().to_path_buf()));
    assert_eq!(texts(&hints), ["Check the SQL queries referring to NAME: q.sql:1"]);
    assert!(sql_query_analysis(&d, &SqlScan::default(), None).is_empty());
}

#[test]
fn migration_stub_shapes() {
    let (old, new) = models("package p { class A { } }", "package p { class B { } }");
    let d = dm(&old, &new, r#"renamed "p.A" to "B";"#);
    assert_eq!(
        migration_stub(&d.differences()[0]).as_deref(),
        Some("<rename-element from=\"p.A\" to=\"B\"/>")
    );
    let (old, new) = models(ECU_OLD, ECU_NEW);
    assert_eq!(migration_stub(&dm(&old, &new, "").differences()[0]), None);
}

#[test]
fn no_unrelated_presettings_needed() {
    let (old, new) = models(ECU_OLD, ECU_NEW);
    let d = diff_models(&old, &new, &PresettingSet::default(), &MatchConfig::default()).unwrap();
    assert_eq!(d.len(), 1);
}
