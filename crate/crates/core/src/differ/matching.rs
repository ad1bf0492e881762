//! Element matching between two model versions.
//!
//! Four stages, each only considering elements left unmatched by the ones
//! before it:
//!
//! 1. presettings are applied as forced pairs;
//! 2. elements whose qualified name, with the owner mapped through the
//!    matches found so far, exists in the new model are paired;
//! 3. classes (by name and attribute-set similarity), attributes inside
//!    matched class pairs (by name and type) and associations (by name) are
//!    paired greedily by descending score, keeping pairs that reach the
//!    threshold;
//! 4. whatever is left counts as added or deleted.
//!
//! Packages never take part in stage 3.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::presetting::{Instruction, PresetTarget, Presetting, PresettingSet};
use super::similarity::{name_similarity, structural_similarity};
use crate::model::{ElementKind, ElementRef, Model, ModelIndex, QualifiedName};

pub const DEFAULT_THRESHOLD: f64 = 0.65;

const CLASS_NAME_WEIGHT: f64 = 0.6;
const CLASS_STRUCT_WEIGHT: f64 = 0.4;
const ATTR_NAME_WEIGHT: f64 = 0.7;
const ATTR_TYPE_WEIGHT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchConfig {
    pub threshold: f64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Preset,
    Exact,
    Similarity,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Preset => "preset",
            Provenance::Exact => "exact",
            Provenance::Similarity => "similarity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub old: ElementRef,
    pub new: ElementRef,
    pub provenance: Provenance,
}

/// Partial injective mapping from old-model to new-model elements of the
/// same kind.
#[derive(Debug, Clone, Default)]
pub struct Matching {
    pairs: Vec<MatchedPair>,
    forward: HashMap<ElementRef, usize>,
    backward: HashMap<ElementRef, usize>,
}

impl Matching {
    pub fn pairs(&self) -> &[MatchedPair] {
        &self.pairs
    }

    pub fn image(&self, old: &ElementRef) -> Option<&ElementRef> {
        self.forward.get(old).map(|&i| &self.pairs[i].new)
    }

    pub fn preimage(&self, new: &ElementRef) -> Option<&ElementRef> {
        self.backward.get(new).map(|&i| &self.pairs[i].old)
    }

    pub fn provenance(&self, old: &ElementRef) -> Option<Provenance> {
        self.forward.get(old).map(|&i| self.pairs[i].provenance)
    }

    pub fn is_old_matched(&self, old: &ElementRef) -> bool {
        self.forward.contains_key(old)
    }

    pub fn is_new_matched(&self, new: &ElementRef) -> bool {
        self.backward.contains_key(new)
    }

    /// Adds a pair. Returns `false` (and changes nothing) when either side
    /// is already paired or the kinds differ.
    pub fn insert(&mut self, old: ElementRef, new: ElementRef, provenance: Provenance) -> bool {
        if old.kind != new.kind || self.is_old_matched(&old) || self.is_new_matched(&new) {
            return false;
        }
        let i = self.pairs.len();
        self.forward.insert(old.clone(), i);
        self.backward.insert(new.clone(), i);
        self.pairs.push(MatchedPair {
            old,
            new,
            provenance,
        });
        true
    }

    /// New-side qualified name of an old package or class, falling back to
    /// the old name when it has no match.
    pub fn map_qname(&self, kind: ElementKind, old: &QualifiedName) -> QualifiedName {
        ElementRef::new(kind, old.clone())
            .and_then(|r| self.image(&r).map(|n| n.qname.clone()))
            .unwrap_or_else(|| old.clone())
    }

    pub fn count(&self, provenance: Provenance) -> usize {
        self.pairs.iter().filter(|p| p.provenance == provenance).count()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchError {
    #[error("presetting `{instruction}` (line {line}): {reason}")]
    Presetting {
        instruction: String,
        line: usize,
        reason: String,
    },
    #[error("threshold {0} outside (0, 1]")]
    Threshold(f64),
}

pub fn match_models(old: &Model, new: &Model, ps: &PresettingSet) -> Result<Matching, MatchError> {
    match_models_with(old, new, ps, &MatchConfig::default())
}

pub fn match_models_with(
    old: &Model,
    new: &Model,
    ps: &PresettingSet,
    cfg: &MatchConfig,
) -> Result<Matching, MatchError> {
    if !(cfg.threshold > 0.0 && cfg.threshold <= 1.0) {
        return Err(MatchError::Threshold(cfg.threshold));
    }
    let oi = ModelIndex::new(old);
    let ni = ModelIndex::new(new);
    let mut m = Matching::default();

    apply_presettings(&oi, &ni, ps, &mut m)?;

    // Packages: exact only, pre-order so parents are settled first.
    for p in oi.packages() {
        let old_ref = ElementRef::package(p.qname.clone());
        if m.is_old_matched(&old_ref) {
            continue;
        }
        let parent = p
            .parent
            .as_ref()
            .map(|q| m.map_qname(ElementKind::Package, q));
        let target = QualifiedName::join(parent.as_ref(), &p.package.name);
        if ni.package(&target).is_some() {
            m.insert(old_ref, ElementRef::package(target), Provenance::Exact);
        }
    }

    // Classes.
    for c in oi.classes() {
        let old_ref = ElementRef::class(c.qname.clone());
        if m.is_old_matched(&old_ref) {
            continue;
        }
        let target = m.map_qname(ElementKind::Package, &c.package).child(&c.class.name);
        if ni.class(&target).is_some() {
            m.insert(old_ref, ElementRef::class(target), Provenance::Exact);
        }
    }
    let old_left: Vec<_> = oi
        .classes()
        .iter()
        .filter(|c| !m.is_old_matched(&ElementRef::class(c.qname.clone())))
        .collect();
    let new_left: Vec<_> = ni
        .classes()
        .iter()
        .filter(|c| !m.is_new_matched(&ElementRef::class(c.qname.clone())))
        .collect();
    let mut candidates = Vec::new();
    for o in &old_left {
        for n in &new_left {
            let score = CLASS_NAME_WEIGHT * name_similarity(&o.class.name, &n.class.name)
                + CLASS_STRUCT_WEIGHT * structural_similarity(o.class, n.class);
            if score >= cfg.threshold {
                candidates.push(Candidate::new(score, &o.qname, &n.qname));
            }
        }
    }
    greedy(&mut m, candidates, ElementKind::Class);

    // Attributes.
    for a in oi.attributes() {
        let old_ref = ElementRef::attribute(a.qname.clone());
        if m.is_old_matched(&old_ref) {
            continue;
        }
        let Some(class) = m.image(&ElementRef::class(a.class.clone())) else {
            continue;
        };
        let target = class.qname.with_attribute(&a.attribute.name);
        if ni.attribute(&target).is_some() {
            m.insert(old_ref, ElementRef::attribute(target), Provenance::Exact);
        }
    }
    let mut new_attrs_by_class: HashMap<&QualifiedName, Vec<_>> = HashMap::new();
    for a in ni.attributes() {
        if !m.is_new_matched(&ElementRef::attribute(a.qname.clone())) {
            new_attrs_by_class.entry(&a.class).or_default().push(a);
        }
    }
    let mut candidates = Vec::new();
    for o in oi.attributes() {
        if m.is_old_matched(&ElementRef::attribute(o.qname.clone())) {
            continue;
        }
        let Some(class) = m.image(&ElementRef::class(o.class.clone())) else {
            continue;
        };
        for n in new_attrs_by_class.get(&class.qname).into_iter().flatten() {
            let type_sim = if o.attribute.type_name == n.attribute.type_name {
                1.0
            } else {
                0.0
            };
            let score = ATTR_NAME_WEIGHT * name_similarity(&o.attribute.name, &n.attribute.name)
                + ATTR_TYPE_WEIGHT * type_sim;
            if score >= cfg.threshold {
                candidates.push(Candidate::new(score, &o.qname, &n.qname));
            }
        }
    }
    greedy(&mut m, candidates, ElementKind::Attribute);

    // Associations: same name and same (mapped) ends first, then by name.
    for a in oi.associations() {
        let old_ref = ElementRef::association(&a.name);
        let Some(n) = ni.association(&a.name) else {
            continue;
        };
        let source = m.map_qname(ElementKind::Class, &a.source);
        let target = m.map_qname(ElementKind::Class, &a.target);
        if n.source == source && n.target == target {
            m.insert(old_ref, ElementRef::association(&n.name), Provenance::Exact);
        }
    }
    let mut candidates = Vec::new();
    for o in oi.associations() {
        if m.is_old_matched(&ElementRef::association(&o.name)) {
            continue;
        }
        for n in ni.associations() {
            if m.is_new_matched(&ElementRef::association(&n.name)) {
                continue;
            }
            let score = name_similarity(&o.name, &n.name);
            if score >= cfg.threshold {
                candidates.push(Candidate::new(
                    score,
                    &QualifiedName::simple(&o.name),
                    &QualifiedName::simple(&n.name),
                ));
            }
        }
    }
    greedy(&mut m, candidates, ElementKind::Association);

    Ok(m)
}

struct Candidate {
    score: f64,
    old_key: String,
    new_key: String,
    old: QualifiedName,
    new: QualifiedName,
}

impl Candidate {
    fn new(score: f64, old: &QualifiedName, new: &QualifiedName) -> Self {
        Self {
            score,
            old_key: old.to_string(),
            new_key: new.to_string(),
            old: old.clone(),
            new: new.clone(),
        }
    }
}

/// Best score first; ties broken by (old name, new name) lexicographically.
fn greedy(m: &mut Matching, mut candidates: Vec<Candidate>, kind: ElementKind) {
    candidates.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.old_key.cmp(&b.old_key))
            .then_with(|| a.new_key.cmp(&b.new_key))
    });
    for c in candidates {
        let old = ElementRef::new(kind, c.old).expect("kind-consistent candidate");
        let new = ElementRef::new(kind, c.new).expect("kind-consistent candidate");
        m.insert(old, new, Provenance::Similarity);
    }
}

fn apply_presettings(
    oi: &ModelIndex<'_>,
    ni: &ModelIndex<'_>,
    ps: &PresettingSet,
    m: &mut Matching,
) -> Result<(), MatchError> {
    let fail = |p: &Presetting, reason: String| MatchError::Presetting {
        instruction: p.to_string(),
        line: p.line,
        reason,
    };

    let mut resolved = Vec::new();
    for p in ps.iter() {
        let kind = if p.subject.is_attribute() {
            ElementKind::Attribute
        } else if oi.class(&p.subject).is_some() {
            ElementKind::Class
        } else {
            ElementKind::Package
        };
        let subject = ElementRef::new(kind, p.subject.clone()).expect("kind derived from name");
        if !oi.contains(&subject) {
            return Err(fail(p, format!("`{}` not found in the old model", p.subject)));
        }
        resolved.push((kind, subject, p));
    }
    // Owners before members so member targets see their owner's new name.
    resolved.sort_by_key(|(kind, _, _)| *kind);

    for (kind, subject, p) in resolved {
        let owner_kind = match kind {
            ElementKind::Attribute => ElementKind::Class,
            _ => ElementKind::Package,
        };
        let target = match (&p.instruction, &p.target) {
            (Instruction::Renamed, PresetTarget::Name(name)) => {
                let owner = p.subject.container().map(|c| m.map_qname(owner_kind, &c));
                match kind {
                    ElementKind::Attribute => owner.expect("attribute owner").with_attribute(name),
                    _ => QualifiedName::join(owner.as_ref(), name),
                }
            }
            (Instruction::Moved, PresetTarget::Container(container)) => {
                if kind == ElementKind::Package {
                    return Err(fail(p, "packages can only be renamed".into()));
                }
                p.subject.rehomed(Some(container))
            }
            _ => return Err(fail(p, "instruction and target do not agree".into())),
        };
        let new_ref = ElementRef::new(kind, target.clone()).expect("same kind as subject");
        if !ni.contains(&new_ref) {
            return Err(fail(p, format!("{kind} `{target}` not found in the new model")));
        }
        if m.is_new_matched(&new_ref) {
            return Err(fail(p, format!("`{target}` is already the target of another presetting")));
        }
        m.insert(subject, new_ref, Provenance::Preset);
    }
    Ok(())
}
