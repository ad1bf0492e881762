//! Seeded synthetic model pairs with a known difference manifest.
//!
//! The generator builds an old model, plans an edit script against it and
//! applies the script with [`apply_edit_script`]. The manifest is derived from
//! the script alone, never from the differ, so it can serve as an oracle for
//! [`diff_models`](crate::differ::diff_models).
//!
//! Recoverability rests on a few construction rules:
//!
//! * class, package and association names are pairwise dissimilar
//!   (name similarity below the default threshold), apart from rename pairs;
//! * attribute names are unique across the whole model, so two distinct
//!   classes never share structure;
//! * every edit that touches a class or its attributes consumes that class,
//!   so no class is edited twice;
//! * edits that point at other classes (superclass, association ends) only
//!   point at classes no other edit touches.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::differ::{
    name_similarity, AssociationFacet, DiffKind, ModelDifference, DEFAULT_THRESHOLD,
};
use crate::model::{
    apply_edit_script, Association, Attribute, Cardinality, ClassDecl, EditOp, ElementRef, Model,
    ModelIndex, Package, QualifiedName,
};

pub const ROOT_PACKAGE: &str = "gen";

const TYPES: &[&str] = &["String", "Integer", "Long", "Boolean", "Date", "Decimal"];
const STEREOTYPES: &[&str] = &["persistent", "active", "entity"];
const CLASSES_PER_PACKAGE: usize = 40;

fn cardinalities() -> [Cardinality; 4] {
    [Cardinality::ONE, Cardinality { lower: 0, upper: Some(1) }, Cardinality::many(0), Cardinality::many(1)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Synthetic {
    pub seed: u64,
    pub old: Model,
    pub new: Model,
    pub script: Vec<EditOp>,
    /// Expected differences in canonical order.
    pub manifest: Vec<ModelDifference>,
}

/// Serialized form of the manifest file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub classes: usize,
    pub edits: usize,
    pub script: Vec<EditOp>,
    pub differences: Vec<ModelDifference>,
}

impl Synthetic {
    pub fn manifest_json(&self) -> String {
        let m = Manifest {
            seed: self.seed,
            classes: self.old.class_count(),
            edits: self.script.len(),
            script: self.script.clone(),
            differences: self.manifest.clone(),
        };
        let mut s = serde_json::to_string_pretty(&m).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Letter histogram; half its L1 distance bounds the edit distance from
/// below, which lets most pairs skip the full computation.
fn histogram(s: &str) -> [u16; 26] {
    let mut h = [0u16; 26];
    for c in s.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_lowercase() {
            h[(c as u8 - b'a') as usize] += 1;
        }
    }
    h
}

struct Names {
    taken: Vec<(String, [u16; 26])>,
    all: HashSet<String>,
}

impl Names {
    fn new() -> Self {
        Self {
            taken: Vec::new(),
            all: HashSet::new(),
        }
    }

    fn dissimilar(&self, cand: &str, except: Option<&str>) -> bool {
        let h = histogram(cand);
        let len = cand.chars().count();
        self.taken.iter().all(|(other, oh)| {
            if Some(other.as_str()) == except {
                return true;
            }
            let olen = other.chars().count();
            let l1: usize = h.iter().zip(oh).map(|(a, b)| a.abs_diff(*b) as usize).sum();
            let lower = (l1.div_ceil(2)).max(len.abs_diff(olen));
            let budget = (1.0 - DEFAULT_THRESHOLD) * len.max(olen) as f64;
            lower as f64 > budget || name_similarity(cand, other) < DEFAULT_THRESHOLD
        })
    }

    fn admit(&mut self, cand: String, except: Option<&str>) -> Option<String> {
        if self.all.contains(&cand) || !self.dissimilar(&cand, except) {
            return None;
        }
        self.all.insert(cand.clone());
        let h = histogram(&cand);
        self.taken.push((cand.clone(), h));
        Some(cand)
    }
}

fn word(rng: &mut ChaCha8Rng, len: usize) -> String {
    (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect()
}

fn capitalized(rng: &mut ChaCha8Rng, len: usize) -> String {
    let mut w = word(rng, len);
    w[..1].make_ascii_uppercase();
    w
}

struct Gen {
    rng: ChaCha8Rng,
    names: Names,
    attr_names: HashSet<String>,
}

impl Gen {
    fn fresh_name(&mut self, upper: bool) -> String {
        loop {
            let len = self.rng.gen_range(8..=11);
            let cand = if upper {
                capitalized(&mut self.rng, len)
            } else {
                word(&mut self.rng, len)
            };
            if let Some(n) = self.names.admit(cand, None) {
                return n;
            }
        }
    }

    /// A rename target close enough to `old` to be matched by similarity.
    fn rename_of(&mut self, old: &str) -> String {
        loop {
            let cand = format!("{old}{}", word(&mut self.rng, 2));
            if let Some(n) = self.names.admit(cand, Some(old)) {
                return n;
            }
        }
    }

    fn fresh_attr_name(&mut self) -> String {
        loop {
            let len = self.rng.gen_range(6..=9);
            let cand = word(&mut self.rng, len);
            if self.attr_names.insert(cand.clone()) {
                return cand;
            }
        }
    }

    fn attr_rename_of(&mut self, old: &str) -> String {
        loop {
            let cand = format!("{old}{}", word(&mut self.rng, 1));
            if self.attr_names.insert(cand.clone()) {
                return cand;
            }
        }
    }

    fn attribute(&mut self) -> Attribute {
        let mut a = Attribute::new(self.fresh_attr_name(), *TYPES.choose(&mut self.rng).expect("types"));
        a.cardinality = *cardinalities().choose(&mut self.rng).expect("cards");
        if self.rng.gen_bool(0.3) {
            a.stereotypes.insert("persistent".into());
        }
        a
    }

    fn class(&mut self) -> ClassDecl {
        let mut c = ClassDecl::new(self.fresh_name(true));
        if self.rng.gen_bool(0.5) {
            c.stereotypes.insert("persistent".into());
        }
        for _ in 0..self.rng.gen_range(1..=4) {
            let a = self.attribute();
            c.attributes.push(a);
        }
        c
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    AddClass,
    DeleteClass,
    RenameClass,
    MoveClass,
    SetSuperclass,
    AddAttribute,
    DeleteAttribute,
    RenameAttribute,
    RetypeAttribute,
    SetCardinality,
    AddStereotype,
    RemoveStereotype,
    AddAssociation,
    DeleteAssociation,
    SetAssociationCardinality,
    AddPackage,
}

const KINDS: &[(Kind, u32)] = &[
    (Kind::AddClass, 6),
    (Kind::DeleteClass, 3),
    (Kind::RenameClass, 3),
    (Kind::MoveClass, 3),
    (Kind::SetSuperclass, 1),
    (Kind::AddAttribute, 3),
    (Kind::DeleteAttribute, 2),
    (Kind::RenameAttribute, 3),
    (Kind::RetypeAttribute, 3),
    (Kind::SetCardinality, 3),
    (Kind::AddStereotype, 2),
    (Kind::RemoveStereotype, 1),
    (Kind::AddAssociation, 1),
    (Kind::DeleteAssociation, 1),
    (Kind::SetAssociationCardinality, 1),
    (Kind::AddPackage, 1),
];

struct Slot {
    package: QualifiedName,
    class: ClassDecl,
    used: bool,
    /// Referenced by an association or superclass; must survive.
    pinned: bool,
}

impl Slot {
    fn qname(&self) -> QualifiedName {
        self.package.child(&self.class.name)
    }
}

/// Builds a model of `classes` classes and a script of `edits` edits. The
/// result is a pure function of the three arguments.
pub fn generate_synthetic(classes: usize, edits: usize, seed: u64) -> Synthetic {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        names: Names::new(),
        attr_names: HashSet::new(),
    };
    g.names.admit(ROOT_PACKAGE.into(), None);

    let root = QualifiedName::simple(ROOT_PACKAGE);
    let n_packages = classes.div_ceil(CLASSES_PER_PACKAGE).max(1);
    let packages: Vec<QualifiedName> = (0..n_packages).map(|_| root.child(g.fresh_name(false))).collect();
    let placed: Vec<(QualifiedName, ClassDecl)> = (0..classes)
        .map(|_| (packages.choose(&mut g.rng).expect("packages").clone(), g.class()))
        .collect();

    let mut associations = Vec::new();
    if placed.len() >= 2 {
        for _ in 0..classes / 10 {
            let s = placed.choose(&mut g.rng).expect("classes");
            let t = placed.choose(&mut g.rng).expect("classes");
            associations.push(Association {
                name: g.fresh_name(true),
                source: s.0.child(&s.1.name),
                target: t.0.child(&t.1.name),
                source_card: *cardinalities().choose(&mut g.rng).expect("cards"),
                target_card: *cardinalities().choose(&mut g.rng).expect("cards"),
            });
        }
    }

    let mut old = Model::default();
    let mut root_pkg = Package::new(ROOT_PACKAGE);
    for p in &packages {
        let mut pkg = Package::new(p.simple_name());
        pkg.classes = placed.iter().filter(|(q, _)| q == p).map(|(_, c)| c.clone()).collect();
        root_pkg.packages.push(pkg);
    }
    old.packages.push(root_pkg);
    old.associations = associations;
    evolve_with(&mut g, old, edits, seed)
}

/// Plans `edits` edits against an existing model, for example the `new`
/// model of a previous [`Synthetic`], to build version chains. The model must keep the
/// generator's conventions (dissimilar names, model-wide unique attribute
/// names, every class with at least one attribute) for the manifest to be
/// recoverable.
pub fn evolve(old: &Model, edits: usize, seed: u64) -> Synthetic {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        names: Names::new(),
        attr_names: HashSet::new(),
    };
    let index = ModelIndex::new(old);
    let existing = index
        .packages()
        .iter()
        .map(|p| p.qname.simple_name().to_string())
        .chain(index.classes().iter().map(|c| c.class.name.clone()))
        .chain(old.associations.iter().map(|a| a.name.clone()));
    for name in existing {
        if g.names.all.insert(name.clone()) {
            let h = histogram(&name);
            g.names.taken.push((name, h));
        }
    }
    g.attr_names
        .extend(index.attributes().iter().map(|a| a.attribute.name.clone()));
    evolve_with(&mut g, old.clone(), edits, seed)
}

fn evolve_with(g: &mut Gen, old: Model, edits: usize, seed: u64) -> Synthetic {
    let index = ModelIndex::new(&old);
    let root = old
        .packages
        .iter()
        .find(|p| p.name == ROOT_PACKAGE)
        .or(old.packages.first())
        .map(|p| QualifiedName::simple(&p.name))
        .unwrap_or_else(|| QualifiedName::simple(ROOT_PACKAGE));
    let packages: Vec<QualifiedName> = index
        .packages()
        .iter()
        .map(|p| p.qname.clone())
        .filter(|q| *q != root)
        .collect();
    let packages = if packages.is_empty() { vec![root.clone()] } else { packages };
    let referenced: HashSet<&QualifiedName> = index
        .classes()
        .iter()
        .filter_map(|c| c.class.superclass.as_ref())
        .chain(old.associations.iter().flat_map(|a| [&a.source, &a.target]))
        .collect();
    let mut slots: Vec<Slot> = index
        .classes()
        .iter()
        .map(|c| Slot {
            package: c.package.clone(),
            class: c.class.clone(),
            used: false,
            pinned: referenced.contains(&c.qname),
        })
        .collect();
    let mut associations: Vec<(Association, bool)> = old.associations.iter().map(|a| (a.clone(), false)).collect();

    let mut script = Vec::new();
    let mut manifest = Vec::new();
    let total: u32 = KINDS.iter().map(|(_, w)| w).sum();
    while script.len() < edits {
        let mut pick = g.rng.gen_range(0..total);
        let kind = KINDS
            .iter()
            .find(|(_, w)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|(k, _)| *k)
            .expect("weighted pick");
        if let Some((op, diffs)) = plan(kind, g, &mut slots, &mut associations, &packages, &root) {
            script.push(op);
            manifest.extend(diffs);
        }
    }

    let new = apply_edit_script(&old, &script).expect("generated scripts apply");
    manifest.sort_by(|a, b| a.canonical_cmp(b));
    Synthetic {
        seed,
        old,
        new,
        script,
        manifest,
    }
}

fn free_slot(g: &mut Gen, slots: &[Slot], ok: impl Fn(&Slot) -> bool) -> Option<usize> {
    let free: Vec<usize> = (0..slots.len()).filter(|&i| !slots[i].used && ok(&slots[i])).collect();
    free.choose(&mut g.rng).copied()
}

fn class_ref(q: QualifiedName) -> ElementRef {
    ElementRef::class(q)
}

fn attr_ref(q: QualifiedName) -> ElementRef {
    ElementRef::attribute(q)
}

/// Plans one edit of `kind`, or `None` when no target qualifies.
fn plan(
    kind: Kind,
    g: &mut Gen,
    slots: &mut [Slot],
    associations: &mut [(Association, bool)],
    packages: &[QualifiedName],
    root: &QualifiedName,
) -> Option<(EditOp, Vec<ModelDifference>)> {
    let changed = ModelDifference::changed;
    match kind {
        Kind::AddClass => {
            let package = packages.choose(&mut g.rng).expect("packages").clone();
            let class = g.class();
            let q = package.child(&class.name);
            let mut diffs = vec![ModelDifference::added(class_ref(q.clone()))];
            diffs.extend(class.attributes.iter().map(|a| ModelDifference::added(attr_ref(q.with_attribute(&a.name)))));
            Some((EditOp::AddClass { package, class }, diffs))
        }
        Kind::DeleteClass => {
            let i = free_slot(g, slots, |s| !s.pinned)?;
            slots[i].used = true;
            let q = slots[i].qname();
            let mut diffs = vec![ModelDifference::deleted(class_ref(q.clone()))];
            diffs.extend(
                slots[i]
                    .class
                    .attributes
                    .iter()
                    .map(|a| ModelDifference::deleted(attr_ref(q.with_attribute(&a.name)))),
            );
            Some((EditOp::DeleteClass { class: q }, diffs))
        }
        Kind::RenameClass => {
            let i = free_slot(g, slots, |_| true)?;
            slots[i].used = true;
            let q = slots[i].qname();
            let new_name = g.rename_of(&slots[i].class.name);
            let d = changed(
                DiffKind::RenamedClass,
                class_ref(q.clone()),
                class_ref(q.renamed(&new_name)),
                Some(slots[i].class.name.clone()),
                Some(new_name.clone()),
            );
            Some((EditOp::RenameClass { class: q, new_name }, vec![d]))
        }
        Kind::MoveClass => {
            if packages.len() < 2 {
                return None;
            }
            let i = free_slot(g, slots, |_| true)?;
            let from = slots[i].package.clone();
            let to = packages.iter().filter(|p| **p != from).collect::<Vec<_>>().choose(&mut g.rng).copied()?.clone();
            slots[i].used = true;
            let q = slots[i].qname();
            let d = changed(
                DiffKind::MovedClass,
                class_ref(q.clone()),
                class_ref(to.child(q.simple_name())),
                Some(from.to_string()),
                Some(to.to_string()),
            );
            Some((EditOp::MoveClass { class: q, package: to }, vec![d]))
        }
        Kind::SetSuperclass => {
            let i = free_slot(g, slots, |s| s.class.superclass.is_none())?;
            slots[i].used = true;
            let Some(j) = free_slot(g, slots, |_| true) else {
                slots[i].used = false;
                return None;
            };
            slots[j].used = true;
            slots[j].pinned = true;
            let (q, sup) = (slots[i].qname(), slots[j].qname());
            let d = changed(
                DiffKind::ChangedClassProperty,
                class_ref(q.clone()),
                class_ref(q.clone()),
                None,
                Some(sup.to_string()),
            );
            Some((
                EditOp::SetSuperclass {
                    class: q,
                    superclass: Some(sup),
                },
                vec![d],
            ))
        }
        Kind::AddAttribute => {
            let i = free_slot(g, slots, |_| true)?;
            slots[i].used = true;
            let q = slots[i].qname();
            let attribute = g.attribute();
            let d = ModelDifference::added(attr_ref(q.with_attribute(&attribute.name)));
            Some((EditOp::AddAttribute { class: q, attribute }, vec![d]))
        }
        Kind::DeleteAttribute
        | Kind::RenameAttribute
        | Kind::RetypeAttribute
        | Kind::SetCardinality
        | Kind::AddStereotype
        | Kind::RemoveStereotype => {
            let need_two = kind == Kind::DeleteAttribute;
            let need_stereo = kind == Kind::RemoveStereotype;
            let i = free_slot(g, slots, |s| {
                !s.class.attributes.is_empty()
                    && (!need_two || s.class.attributes.len() >= 2)
                    && (!need_stereo
                        || !s.class.stereotypes.is_empty()
                        || s.class.attributes.iter().any(|a| !a.stereotypes.is_empty()))
            })?;
            slots[i].used = true;
            let cq = slots[i].qname();
            let class = slots[i].class.clone();
            attribute_edit(kind, g, &cq, &class)
        }
        Kind::AddAssociation => {
            let s = free_slot(g, slots, |_| true)?;
            slots[s].used = true;
            let Some(t) = free_slot(g, slots, |_| true) else {
                slots[s].used = false;
                return None;
            };
            slots[t].used = true;
            slots[s].pinned = true;
            slots[t].pinned = true;
            let a = Association {
                name: g.fresh_name(true),
                source: slots[s].qname(),
                target: slots[t].qname(),
                source_card: *cardinalities().choose(&mut g.rng).expect("cards"),
                target_card: *cardinalities().choose(&mut g.rng).expect("cards"),
            };
            let d = ModelDifference::added(ElementRef::association(&a.name));
            Some((EditOp::AddAssociation { association: a }, vec![d]))
        }
        Kind::DeleteAssociation | Kind::SetAssociationCardinality => {
            let free: Vec<usize> = (0..associations.len()).filter(|&i| !associations[i].1).collect();
            let i = *free.choose(&mut g.rng)?;
            associations[i].1 = true;
            let a = associations[i].0.clone();
            let r = ElementRef::association(&a.name);
            if kind == Kind::DeleteAssociation {
                return Some((EditOp::DeleteAssociation { name: a.name }, vec![ModelDifference::deleted(r)]));
            }
            let card = **cardinalities()
                .iter()
                .filter(|c| **c != a.target_card)
                .collect::<Vec<_>>()
                .choose(&mut g.rng)
                .expect("other cardinalities");
            let mut d = changed(
                DiffKind::ChangedAssociationEnd,
                r.clone(),
                r,
                Some(a.target_card.to_string()),
                Some(card.to_string()),
            );
            d.facet = Some(AssociationFacet::TargetCardinality);
            Some((
                EditOp::SetAssociationCardinality {
                    name: a.name,
                    source_card: a.source_card,
                    target_card: card,
                },
                vec![d],
            ))
        }
        Kind::AddPackage => {
            let package = root.child(g.fresh_name(false));
            let d = ModelDifference::added(ElementRef::package(package.clone()));
            Some((EditOp::AddPackage { package }, vec![d]))
        }
    }
}

fn attribute_edit(
    kind: Kind,
    g: &mut Gen,
    cq: &QualifiedName,
    class: &ClassDecl,
) -> Option<(EditOp, Vec<ModelDifference>)> {
    let changed = ModelDifference::changed;
    let a = class.attributes.choose(&mut g.rng).expect("classes have attributes").clone();
    let aq = cq.with_attribute(&a.name);
    let r = attr_ref(aq.clone());
    Some(match kind {
        Kind::DeleteAttribute => (EditOp::DeleteAttribute { attribute: aq }, vec![ModelDifference::deleted(r)]),
        Kind::RenameAttribute => {
            let new_name = g.attr_rename_of(&a.name);
            let d = changed(
                DiffKind::RenamedAttribute,
                r,
                attr_ref(aq.renamed(&new_name)),
                Some(a.name.clone()),
                Some(new_name.clone()),
            );
            (EditOp::RenameAttribute { attribute: aq, new_name }, vec![d])
        }
        Kind::RetypeAttribute => {
            let t = *TYPES
                .iter()
                .filter(|t| **t != a.type_name)
                .collect::<Vec<_>>()
                .choose(&mut g.rng)
                .expect("other types");
            let d = changed(
                DiffKind::ChangedAttributeType,
                r.clone(),
                r,
                Some(a.type_name.clone()),
                Some(t.to_string()),
            );
            (
                EditOp::RetypeAttribute {
                    attribute: aq,
                    type_name: t.to_string(),
                },
                vec![d],
            )
        }
        Kind::SetCardinality => {
            let c = **cardinalities()
                .iter()
                .filter(|c| **c != a.cardinality)
                .collect::<Vec<_>>()
                .choose(&mut g.rng)
                .expect("other cardinalities");
            let d = changed(
                DiffKind::ChangedAttributeCardinality,
                r.clone(),
                r,
                Some(a.cardinality.to_string()),
                Some(c.to_string()),
            );
            (
                EditOp::SetCardinality {
                    attribute: aq,
                    cardinality: c,
                },
                vec![d],
            )
        }
        Kind::AddStereotype | Kind::RemoveStereotype => {
            let on_class = g.rng.gen_bool(0.5);
            let (element, present): (ElementRef, &BTreeSet<String>) = if on_class {
                (class_ref(cq.clone()), &class.stereotypes)
            } else {
                (r, &a.stereotypes)
            };
            let (element, present) = if kind == Kind::RemoveStereotype && present.is_empty() {
                // fall back to whichever element carries one
                if !class.stereotypes.is_empty() {
                    (class_ref(cq.clone()), &class.stereotypes)
                } else {
                    let b = class.attributes.iter().find(|b| !b.stereotypes.is_empty())?;
                    (attr_ref(cq.with_attribute(&b.name)), &b.stereotypes)
                }
            } else {
                (element, present)
            };
            if kind == Kind::AddStereotype {
                let s = STEREOTYPES.iter().find(|s| !present.contains(**s))?.to_string();
                let d = changed(DiffKind::AddedStereotype, element.clone(), element.clone(), None, Some(s.clone()));
                (
                    EditOp::AddStereotype {
                        element: element.qname,
                        stereotype: s,
                    },
                    vec![d],
                )
            } else {
                let s = present.iter().next()?.clone();
                let d = changed(DiffKind::RemovedStereotype, element.clone(), element.clone(), Some(s.clone()), None);
                (
                    EditOp::RemoveStereotype {
                        element: element.qname,
                        stereotype: s,
                    },
                    vec![d],
                )
            }
        }
        _ => unreachable!("not an attribute-level edit"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differ::{diff_models, MatchConfig, PresettingSet};
    use crate::model::serialize_model;

    #[test]
    fn no_edits_means_identical_models() {
        let s = generate_synthetic(10, 0, 7);
        assert_eq!(s.old, s.new);
        assert!(s.manifest.is_empty());
        assert_eq!(s.old.class_count(), 10);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_synthetic(50, 10, 3);
        let b = generate_synthetic(50, 10, 3);
        assert_eq!(serialize_model(&a.old), serialize_model(&b.old));
        assert_eq!(serialize_model(&a.new), serialize_model(&b.new));
        assert_eq!(a.manifest_json(), b.manifest_json());
        assert_ne!(a.manifest_json(), generate_synthetic(50, 10, 4).manifest_json());
    }

    #[test]
    fn differ_recovers_small_manifests() {
        for seed in 0..40 {
            let s = generate_synthetic(30, 12, seed);
            assert_eq!(s.script.len(), 12);
            let dm = diff_models(&s.old, &s.new, &PresettingSet::default(), &MatchConfig::default()).unwrap();
            assert_eq!(dm.differences(), s.manifest.as_slice(), "seed {seed}");
        }
    }

    #[test]
    fn version_chains_stay_recoverable() {
        let mut model = generate_synthetic(60, 0, 5).new;
        for v in 0..8 {
            let s = evolve(&model, 15, 100 + v);
            let dm = diff_models(&s.old, &s.new, &PresettingSet::default(), &MatchConfig::default()).unwrap();
            assert_eq!(dm.differences(), s.manifest.as_slice(), "version {v}");
            model = s.new;
        }
    }

    #[test]
    fn names_are_pairwise_dissimilar() {
        let s = generate_synthetic(120, 0, 11);
        let names: Vec<String> = crate::model::ModelIndex::new(&s.old)
            .classes()
            .iter()
            .map(|c| c.class.name.clone())
            .collect();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                assert!(name_similarity(a, b) < DEFAULT_THRESHOLD, "{a} {b}");
            }
        }
    }

    #[test]
    fn histogram_bound_is_a_lower_bound() {
        for (a, b) in [("kitten", "sitting"), ("abc", "cba"), ("Name", "name"), ("", "xy")] {
            let l1: usize = histogram(a).iter().zip(histogram(b).iter()).map(|(x, y)| x.abs_diff(*y) as usize).sum();
            assert!(l1.div_ceil(2) <= crate::differ::levenshtein(a, b));
        }
    }
}
