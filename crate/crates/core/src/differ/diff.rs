use std::collections::BTreeSet;

use super::matching::{match_models_with, MatchConfig, MatchError, Matching};
use super::presetting::PresettingSet;
use super::{AssociationFacet, DiffKind, DiffModel, ModelDifference};
use crate::model::{ElementKind, ElementRef, Model, ModelIndex, QualifiedName};

/// Classifies a matching into differences: one `Deleted*` per unmatched old
/// element, one `Added*` per unmatched new element, one change per differing
/// facet of each matched pair.
pub fn compute_diff<'m>(old: &'m Model, new: &'m Model, matching: &Matching) -> DiffModel<'m> {
    let oi = ModelIndex::new(old);
    let ni = ModelIndex::new(new);
    let mut out = Vec::new();

    for r in oi.refs() {
        if !matching.is_old_matched(&r) {
            out.push(ModelDifference::deleted(r));
        }
    }
    for r in ni.refs() {
        if !matching.is_new_matched(&r) {
            out.push(ModelDifference::added(r));
        }
    }

    for pair in matching.pairs() {
        let (o, n) = (&pair.old, &pair.new);
        let change = |kind, old_value: Option<String>, new_value: Option<String>| {
            ModelDifference::changed(kind, o.clone(), n.clone(), old_value, new_value)
        };
        match o.kind {
            ElementKind::Package => {
                if o.qname.simple_name() != n.qname.simple_name() {
                    out.push(change(
                        DiffKind::RenamedPackage,
                        Some(o.qname.simple_name().into()),
                        Some(n.qname.simple_name().into()),
                    ));
                }
            }
            ElementKind::Class => {
                let oc = oi.class(&o.qname).expect("matched old class");
                let nc = ni.class(&n.qname).expect("matched new class");
                if oc.class.name != nc.class.name {
                    out.push(change(
                        DiffKind::RenamedClass,
                        Some(oc.class.name.clone()),
                        Some(nc.class.name.clone()),
                    ));
                }
                if matching.map_qname(ElementKind::Package, &oc.package) != nc.package {
                    out.push(change(
                        DiffKind::MovedClass,
                        Some(oc.package.to_string()),
                        Some(nc.package.to_string()),
                    ));
                }
                let mapped_super = oc
                    .class
                    .superclass
                    .as_ref()
                    .map(|s| matching.map_qname(ElementKind::Class, s));
                if mapped_super != nc.class.superclass {
                    out.push(change(
                        DiffKind::ChangedClassProperty,
                        oc.class.superclass.as_ref().map(ToString::to_string),
                        nc.class.superclass.as_ref().map(ToString::to_string),
                    ));
                }
                stereotype_deltas(&mut out, o, n, &oc.class.stereotypes, &nc.class.stereotypes);
            }
            ElementKind::Attribute => {
                let oa = oi.attribute(&o.qname).expect("matched old attribute");
                let na = ni.attribute(&n.qname).expect("matched new attribute");
                let (a, b) = (oa.attribute, na.attribute);
                if a.name != b.name {
                    out.push(change(
                        DiffKind::RenamedAttribute,
                        Some(a.name.clone()),
                        Some(b.name.clone()),
                    ));
                }
                if matching.map_qname(ElementKind::Class, &oa.class) != na.class {
                    out.push(change(
                        DiffKind::MovedAttribute,
                        Some(oa.class.to_string()),
                        Some(na.class.to_string()),
                    ));
                }
                if a.type_name != b.type_name {
                    out.push(change(
                        DiffKind::ChangedAttributeType,
                        Some(a.type_name.clone()),
                        Some(b.type_name.clone()),
                    ));
                }
                if a.cardinality != b.cardinality {
                    out.push(change(
                        DiffKind::ChangedAttributeCardinality,
                        Some(a.cardinality.to_string()),
                        Some(b.cardinality.to_string()),
                    ));
                }
                stereotype_deltas(&mut out, o, n, &a.stereotypes, &b.stereotypes);
            }
            ElementKind::Association => {
                let a = oi.association(o.qname.simple_name()).expect("matched old association");
                let b = ni.association(n.qname.simple_name()).expect("matched new association");
                let mut end = |facet, old_value: String, new_value: String| {
                    let mut d = change(DiffKind::ChangedAssociationEnd, Some(old_value), Some(new_value));
                    d.facet = Some(facet);
                    out.push(d);
                };
                if a.name != b.name {
                    end(AssociationFacet::Name, a.name.clone(), b.name.clone());
                }
                let ends: [(AssociationFacet, &QualifiedName, &QualifiedName); 2] = [
                    (AssociationFacet::Source, &a.source, &b.source),
                    (AssociationFacet::Target, &a.target, &b.target),
                ];
                for (facet, from, to) in ends {
                    if &matching.map_qname(ElementKind::Class, from) != to {
                        end(facet, from.to_string(), to.to_string());
                    }
                }
                if a.source_card != b.source_card {
                    end(
                        AssociationFacet::SourceCardinality,
                        a.source_card.to_string(),
                        b.source_card.to_string(),
                    );
                }
                if a.target_card != b.target_card {
                    end(
                        AssociationFacet::TargetCardinality,
                        a.target_card.to_string(),
                        b.target_card.to_string(),
                    );
                }
            }
        }
    }
    DiffModel::new(old, new, out)
}

fn stereotype_deltas(
    out: &mut Vec<ModelDifference>,
    old: &ElementRef,
    new: &ElementRef,
    before: &BTreeSet<String>,
    after: &BTreeSet<String>,
) {
    for s in after.difference(before) {
        out.push(ModelDifference::changed(
            DiffKind::AddedStereotype,
            old.clone(),
            new.clone(),
            None,
            Some(s.clone()),
        ));
    }
    for s in before.difference(after) {
        out.push(ModelDifference::changed(
            DiffKind::RemovedStereotype,
            old.clone(),
            new.clone(),
            Some(s.clone()),
            None,
        ));
    }
}

/// Matching followed by classification.
pub fn diff_models<'m>(
    old: &'m Model,
    new: &'m Model,
    ps: &PresettingSet,
    cfg: &MatchConfig,
) -> Result<DiffModel<'m>, MatchError> {
    let matching = match_models_with(old, new, ps, cfg)?;
    Ok(compute_diff(old, new, &matching))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differ::{match_models, parse_presettings};
    use crate::model::parse_model;

    fn diff(old: &str, new: &str, presets: &str) -> Vec<ModelDifference> {
        let old = parse_model(old).unwrap();
        let new = parse_model(new).unwrap();
        let ps = parse_presettings(presets).unwrap();
        let m = match_models(&old, &new, &ps).unwrap();
        compute_diff(&old, &new, &m).differences().to_vec()
    }

    #[test]
    fn identical_models_have_no_differences() {
        let text = "package de { <<persistent>> class A { x: T [0..*] } class B extends de.A {} }
                    association R [1] de.A -> [1] de.B";
        assert!(diff(text, text, "").is_empty());
    }

    #[test]
    fn added_class() {
        let d = diff(
            "package de { package test {} }",
            "package de { package test { <<persistent>> <<active>> class ECU {} } }",
            "",
        );
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiffKind::AddedClass);
        assert_eq!(d[0].subject.qname.to_string(), "de.test.ECU");
        assert_eq!(d[0].description(), "Added class 'de.test.ECU'");
    }

    #[test]
    fn presetting_rename_of_attribute() {
        let d = diff(
            "package de { class TroubleCd { name: String } }",
            "package de { class TroubleCd { newName: String } }",
            r#"renamed "de.TroubleCd#name" to "newName";"#,
        );
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiffKind::RenamedAttribute);
        assert_eq!(d[0].old_value.as_deref(), Some("name"));
        assert_eq!(d[0].new_value.as_deref(), Some("newName"));
        assert_eq!(
            d[0].counterpart.as_ref().unwrap().qname.to_string(),
            "de.TroubleCd#newName"
        );
    }

    #[test]
    fn without_presetting_the_rename_is_delete_plus_add() {
        // name -> label scores 0.7 * 0.4 + 0.3 = 0.58, below the threshold.
        let d = diff(
            "package de { class TroubleCd { name: String } }",
            "package de { class TroubleCd { label: String } }",
            "",
        );
        let kinds: Vec<_> = d.iter().map(|d| d.kind).collect();
        assert_eq!(kinds, vec![DiffKind::AddedAttribute, DiffKind::DeletedAttribute]);
    }

    #[test]
    fn similar_attribute_names_match_without_presetting() {
        // name -> newName scores 0.7 * (1 - 3/7) + 0.3 = 0.7.
        let d = diff(
            "package de { class TroubleCd { name: String } }",
            "package de { class TroubleCd { newName: String } }",
            "",
        );
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiffKind::RenamedAttribute);
    }

    #[test]
    fn rename_plus_move_gives_two_differences() {
        let d = diff(
            "package a { class Gearbox { x: T } } package b {}",
            "package a {} package b { class Gearbx { x: T } }",
            "",
        );
        let kinds: Vec<_> = d.iter().map(|d| d.kind).collect();
        assert_eq!(kinds, vec![DiffKind::RenamedClass, DiffKind::MovedClass]);
        assert_eq!(d[1].new_value.as_deref(), Some("b"));
    }

    #[test]
    fn facet_changes_and_stereotypes() {
        let d = diff(
            "package p { <<persistent>> class A { <<persistent>> x: Int [0..*] } class B {} class C {} }
             association R [1] p.A -> [1] p.B",
            "package p { <<active>> class A { x: Long [0..1] } class B {} class C {} }
             association R [0..1] p.A -> [1] p.C",
            "",
        );
        let got: Vec<(DiffKind, String)> = d.iter().map(|d| (d.kind, d.description())).collect();
        assert_eq!(
            got,
            vec![
                (DiffKind::ChangedAttributeType, "Changed type of 'p.A#x' from 'Int' to 'Long'".into()),
                (
                    DiffKind::ChangedAttributeCardinality,
                    "Changed cardinality of 'p.A#x' from '[0..*]' to '[0..1]'".into()
                ),
                (DiffKind::AddedStereotype, "Changed stereotype of 'p.A' from '' to 'active'".into()),
                (DiffKind::RemovedStereotype, "Changed stereotype of 'p.A' from 'persistent' to ''".into()),
                (DiffKind::RemovedStereotype, "Changed stereotype of 'p.A#x' from 'persistent' to ''".into()),
                (DiffKind::ChangedAssociationEnd, "Changed target of 'R' from 'p.B' to 'p.C'".into()),
                (
                    DiffKind::ChangedAssociationEnd,
                    "Changed source cardinality of 'R' from '[1]' to '[0..1]'".into()
                ),
            ]
        );
    }

    #[test]
    fn superclass_change_follows_renames() {
        // Base renamed to Basis (similar enough); the extends clause follows it.
        let d = diff(
            "package p { class Base { k: T } class X extends p.Base {} }",
            "package p { class Basis { k: T } class X extends p.Basis {} }",
            "",
        );
        let kinds: Vec<_> = d.iter().map(|d| d.kind).collect();
        assert_eq!(kinds, vec![DiffKind::RenamedClass]);

        let d = diff(
            "package p { class Base {} class X {} }",
            "package p { class Base {} class X extends p.Base {} }",
            "",
        );
        assert_eq!(d[0].kind, DiffKind::ChangedClassProperty);
        assert_eq!(d[0].description(), "Changed superclass of 'p.X' from '' to 'p.Base'");
    }

    #[test]
    fn deleted_class_takes_its_attributes_along() {
        let d = diff("package p { class Gone { a: T b: T } }", "package p {}", "");
        let subjects: Vec<_> = d.iter().map(|d| (d.kind, d.subject.qname.to_string())).collect();
        assert_eq!(
            subjects,
            vec![
                (DiffKind::DeletedClass, "p.Gone".into()),
                (DiffKind::DeletedAttribute, "p.Gone#a".into()),
                (DiffKind::DeletedAttribute, "p.Gone#b".into()),
            ]
        );
    }

    #[test]
    fn element_order_is_not_significant() {
        let a = "package p { class A { x: T y: T } class B {} } package q {}";
        let b = "package q {} package p { class B {} class A { y: T x: T } }";
        assert!(diff(a, b, "").is_empty());
    }
}
