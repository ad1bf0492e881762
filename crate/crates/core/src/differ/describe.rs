use super::{DiffKind, ModelDifference};

/// English one-liner for a difference. The wording is fixed; checklist text
/// depends on it byte for byte.
pub fn describe_difference(d: &ModelDifference) -> String {
    let kind_word = d.subject.kind.word();
    let qname = &d.subject.qname;
    let old = d.old_value.as_deref().unwrap_or("");
    let new = d.new_value.as_deref().unwrap_or("");
    match d.kind {
        DiffKind::AddedPackage
        | DiffKind::AddedClass
        | DiffKind::AddedAttribute
        | DiffKind::AddedAssociation => format!("Added {kind_word} '{qname}'"),
        DiffKind::DeletedPackage
        | DiffKind::DeletedClass
        | DiffKind::DeletedAttribute
        | DiffKind::DeletedAssociation => format!("Deleted {kind_word} '{qname}'"),
        DiffKind::RenamedPackage | DiffKind::RenamedClass | DiffKind::RenamedAttribute => {
            format!("Renamed {kind_word} '{qname}' to '{new}'")
        }
        DiffKind::MovedClass | DiffKind::MovedAttribute => {
            format!("Moved {kind_word} '{qname}' to '{new}'")
        }
        DiffKind::ChangedClassProperty
        | DiffKind::ChangedAttributeType
        | DiffKind::ChangedAttributeCardinality
        | DiffKind::AddedStereotype
        | DiffKind::RemovedStereotype
        | DiffKind::ChangedAssociationEnd => {
            let facet = match d.kind {
                DiffKind::ChangedClassProperty => "superclass",
                DiffKind::ChangedAttributeType => "type",
                DiffKind::ChangedAttributeCardinality => "cardinality",
                DiffKind::AddedStereotype | DiffKind::RemovedStereotype => "stereotype",
                _ => d.facet.map(|f| f.word()).unwrap_or("end"),
            };
            format!("Changed {facet} of '{qname}' from '{old}' to '{new}'")
        }
    }
}
