//! Model differencing: element matching (with user presettings), typed
//! difference classification, and change descriptions.

mod describe;
mod diff;
mod export;
mod matching;
mod presetting;
mod similarity;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{ElementKind, ElementRef, Model};

pub use describe::describe_difference;
pub use diff::{compute_diff, diff_models};
pub use export::{export_json, export_records, DiffRecord};
pub use matching::{
    match_models, match_models_with, MatchConfig, MatchError, MatchedPair, Matching, Provenance,
    DEFAULT_THRESHOLD,
};
pub use presetting::{
    parse_presettings, Instruction, PresetTarget, Presetting, PresettingError, PresettingSet,
};
pub use similarity::{levenshtein, name_similarity, structural_similarity};

/// Closed catalog of difference kinds. Declaration order is the canonical
/// sort order of a [`DiffModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiffKind {
    AddedPackage,
    DeletedPackage,
    RenamedPackage,
    AddedClass,
    DeletedClass,
    RenamedClass,
    MovedClass,
    ChangedClassProperty,
    AddedAttribute,
    DeletedAttribute,
    RenamedAttribute,
    MovedAttribute,
    ChangedAttributeType,
    ChangedAttributeCardinality,
    AddedStereotype,
    RemovedStereotype,
    AddedAssociation,
    DeletedAssociation,
    ChangedAssociationEnd,
}

impl DiffKind {
    pub const ALL: [DiffKind; 19] = [
        DiffKind::AddedPackage,
        DiffKind::DeletedPackage,
        DiffKind::RenamedPackage,
        DiffKind::AddedClass,
        DiffKind::DeletedClass,
        DiffKind::RenamedClass,
        DiffKind::MovedClass,
        DiffKind::ChangedClassProperty,
        DiffKind::AddedAttribute,
        DiffKind::DeletedAttribute,
        DiffKind::RenamedAttribute,
        DiffKind::MovedAttribute,
        DiffKind::ChangedAttributeType,
        DiffKind::ChangedAttributeCardinality,
        DiffKind::AddedStereotype,
        DiffKind::RemovedStereotype,
        DiffKind::AddedAssociation,
        DiffKind::DeletedAssociation,
        DiffKind::ChangedAssociationEnd,
    ];

    pub fn added(kind: ElementKind) -> Self {
        match kind {
            ElementKind::Package => DiffKind::AddedPackage,
            ElementKind::Class => DiffKind::AddedClass,
            ElementKind::Attribute => DiffKind::AddedAttribute,
            ElementKind::Association => DiffKind::AddedAssociation,
        }
    }

    pub fn deleted(kind: ElementKind) -> Self {
        match kind {
            ElementKind::Package => DiffKind::DeletedPackage,
            ElementKind::Class => DiffKind::DeletedClass,
            ElementKind::Attribute => DiffKind::DeletedAttribute,
            ElementKind::Association => DiffKind::DeletedAssociation,
        }
    }

    pub fn is_addition(self) -> bool {
        matches!(
            self,
            DiffKind::AddedPackage
                | DiffKind::AddedClass
                | DiffKind::AddedAttribute
                | DiffKind::AddedAssociation
                | DiffKind::AddedStereotype
        )
    }

    pub fn is_deletion(self) -> bool {
        matches!(
            self,
            DiffKind::DeletedPackage
                | DiffKind::DeletedClass
                | DiffKind::DeletedAttribute
                | DiffKind::DeletedAssociation
                | DiffKind::RemovedStereotype
        )
    }

    pub fn is_rename(self) -> bool {
        matches!(
            self,
            DiffKind::RenamedPackage | DiffKind::RenamedClass | DiffKind::RenamedAttribute
        )
    }

    pub fn is_move(self) -> bool {
        matches!(self, DiffKind::MovedClass | DiffKind::MovedAttribute)
    }

    /// Name of the predefined rule condition that tests for this kind.
    pub fn condition_name(self) -> &'static str {
        match self {
            DiffKind::AddedPackage => "addedPackage",
            DiffKind::DeletedPackage => "deletedPackage",
            DiffKind::RenamedPackage => "renamedPackage",
            DiffKind::AddedClass => "addedClass",
            DiffKind::DeletedClass => "deletedClass",
            DiffKind::RenamedClass => "renamedClass",
            DiffKind::MovedClass => "movedClass",
            DiffKind::ChangedClassProperty => "changedClassProperty",
            DiffKind::AddedAttribute => "addedAttribute",
            DiffKind::DeletedAttribute => "deletedAttribute",
            DiffKind::RenamedAttribute => "renamedAttribute",
            DiffKind::MovedAttribute => "movedAttribute",
            DiffKind::ChangedAttributeType => "changedAttributeType",
            DiffKind::ChangedAttributeCardinality => "changedAttributeCardinality",
            DiffKind::AddedStereotype => "addedStereotype",
            DiffKind::RemovedStereotype => "removedStereotype",
            DiffKind::AddedAssociation => "addedAssociation",
            DiffKind::DeletedAssociation => "deletedAssociation",
            DiffKind::ChangedAssociationEnd => "changedAssociationEnd",
        }
    }
}

impl fmt::Display for DiffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which part of an association changed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssociationFacet {
    Name,
    Source,
    Target,
    SourceCardinality,
    TargetCardinality,
}

impl AssociationFacet {
    pub fn word(self) -> &'static str {
        match self {
            AssociationFacet::Name => "name",
            AssociationFacet::Source => "source",
            AssociationFacet::Target => "target",
            AssociationFacet::SourceCardinality => "source cardinality",
            AssociationFacet::TargetCardinality => "target cardinality",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelDifference {
    pub kind: DiffKind,
    /// Old-side element, except for additions where it is the new element.
    pub subject: ElementRef,
    /// Set only on `ChangedAssociationEnd`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet: Option<AssociationFacet>,
    pub old_value: Option<String>,
    pub new_value: Option<String>,
    pub counterpart: Option<ElementRef>,
}

impl ModelDifference {
    pub fn added(subject: ElementRef) -> Self {
        Self {
            kind: DiffKind::added(subject.kind),
            subject,
            facet: None,
            old_value: None,
            new_value: None,
            counterpart: None,
        }
    }

    pub fn deleted(subject: ElementRef) -> Self {
        Self {
            kind: DiffKind::deleted(subject.kind),
            subject,
            facet: None,
            old_value: None,
            new_value: None,
            counterpart: None,
        }
    }

    pub fn changed(
        kind: DiffKind,
        subject: ElementRef,
        counterpart: ElementRef,
        old_value: Option<String>,
        new_value: Option<String>,
    ) -> Self {
        Self {
            kind,
            subject,
            facet: None,
            old_value,
            new_value,
            counterpart: Some(counterpart),
        }
    }

    pub fn description(&self) -> String {
        describe_difference(self)
    }

    /// Canonical ordering: kind, subject qualified name, then the remaining
    /// fields so that the order is total.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| {
                self.subject
                    .qname
                    .to_string()
                    .cmp(&other.subject.qname.to_string())
            })
            .then_with(|| self.facet.cmp(&other.facet))
            .then_with(|| self.old_value.cmp(&other.old_value))
            .then_with(|| self.new_value.cmp(&other.new_value))
            .then_with(|| self.counterpart.cmp(&other.counterpart))
    }
}

/// All differences between two models, in canonical order and free of
/// duplicates.
#[derive(Debug, Clone)]
pub struct DiffModel<'m> {
    pub old: &'m Model,
    pub new: &'m Model,
    differences: Vec<ModelDifference>,
}

impl<'m> DiffModel<'m> {
    /// Canonicalizes `differences` (sort + dedup).
    pub fn new(old: &'m Model, new: &'m Model, mut differences: Vec<ModelDifference>) -> Self {
        differences.sort_by(|a, b| a.canonical_cmp(b));
        differences.dedup();
        Self {
            old,
            new,
            differences,
        }
    }

    pub fn differences(&self) -> &[ModelDifference] {
        &self.differences
    }

    pub fn len(&self) -> usize {
        self.differences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differences.is_empty()
    }

    pub fn contains(&self, d: &ModelDifference) -> bool {
        self.differences.contains(d)
    }

    pub fn of_kind(&self, kind: DiffKind) -> impl Iterator<Item = &ModelDifference> {
        self.differences.iter().filter(move |d| d.kind == kind)
    }
}
