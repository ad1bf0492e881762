//! Class-diagram data model and its textual `.cd` format.

mod edit;
mod parse;
mod qname;
mod serialize;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lex::{Pos, SyntaxError};

pub use edit::{apply_edit_script, EditOp};
pub use parse::parse_model;
pub use qname::{QualifiedName, QualifiedNameError};
pub use serialize::serialize_model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cardinality {
    pub lower: u32,
    /// `None` is `*`.
    pub upper: Option<u32>,
}

impl Cardinality {
    pub const ONE: Cardinality = Cardinality {
        lower: 1,
        upper: Some(1),
    };

    pub fn new(lower: u32, upper: Option<u32>) -> Option<Self> {
        match upper {
            Some(u) if u < lower => None,
            _ => Some(Self { lower, upper }),
        }
    }

    pub fn many(lower: u32) -> Self {
        Self { lower, upper: None }
    }

    /// True when some multiplicity allowed by `self` is no longer allowed by
    /// `other`: the lower bound was raised or the upper bound lowered.
    pub fn narrowed_by(&self, other: &Cardinality) -> bool {
        let upper_lowered = match (self.upper, other.upper) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => b < a,
            (_, None) => false,
        };
        other.lower > self.lower || upper_lowered
    }
}

impl Default for Cardinality {
    fn default() -> Self {
        Self::ONE
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) if u == self.lower => write!(f, "[{u}]"),
            Some(u) => write!(f, "[{}..{u}]", self.lower),
            None => write!(f, "[{}..*]", self.lower),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub type_name: String,
    pub cardinality: Cardinality,
    pub stereotypes: BTreeSet<String>,
}

impl Attribute {
    pub fn new(name: impl Into<String>, type_name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            type_name: type_name.into(),
            cardinality: Cardinality::ONE,
            stereotypes: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecl {
    pub name: String,
    pub stereotypes: BTreeSet<String>,
    pub attributes: Vec<Attribute>,
    pub superclass: Option<QualifiedName>,
}

impl ClassDecl {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            stereotypes: BTreeSet::new(),
            attributes: Vec::new(),
            superclass: None,
        }
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Package {
    pub name: String,
    pub packages: Vec<Package>,
    pub classes: Vec<ClassDecl>,
}

impl Package {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Association {
    pub name: String,
    pub source: QualifiedName,
    pub target: QualifiedName,
    pub source_card: Cardinality,
    pub target_card: Cardinality,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Model {
    pub packages: Vec<Package>,
    pub associations: Vec<Association>,
}

impl Model {
    /// Checks every model invariant: unique qualified names, unique
    /// association names, resolvable superclasses and association ends.
    pub fn validate(&self) -> Result<(), ModelError> {
        let index = ModelIndex::checked(self)?;
        for c in index.classes() {
            if let Some(sup) = &c.class.superclass {
                if index.class(sup).is_none() {
                    return Err(ModelError::Unresolved {
                        what: "superclass",
                        name: sup.to_string(),
                        pos: None,
                    });
                }
            }
        }
        for a in &self.associations {
            for (what, end) in [("association source", &a.source), ("association target", &a.target)] {
                if index.class(end).is_none() {
                    return Err(ModelError::Unresolved {
                        what,
                        name: end.to_string(),
                        pos: None,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn class_count(&self) -> usize {
        fn count(p: &Package) -> usize {
            p.classes.len() + p.packages.iter().map(count).sum::<usize>()
        }
        self.packages.iter().map(count).sum()
    }

    pub(crate) fn package_mut(&mut self, qname: &QualifiedName) -> Option<&mut Package> {
        let (first, rest) = qname.segments().split_first()?;
        let mut pkg = self.packages.iter_mut().find(|p| &p.name == first)?;
        for seg in rest {
            pkg = pkg.packages.iter_mut().find(|p| &p.name == seg)?;
        }
        Some(pkg)
    }

    pub(crate) fn class_mut(&mut self, qname: &QualifiedName) -> Option<&mut ClassDecl> {
        let pkg = self.package_mut(&qname.container()?)?;
        pkg.classes.iter_mut().find(|c| c.name == qname.simple_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Package,
    Class,
    Attribute,
    Association,
}

impl ElementKind {
    pub fn word(self) -> &'static str {
        match self {
            ElementKind::Package => "package",
            ElementKind::Class => "class",
            ElementKind::Attribute => "attribute",
            ElementKind::Association => "association",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementRef {
    pub kind: ElementKind,
    pub qname: QualifiedName,
}

impl ElementRef {
    /// `None` when the kind and the presence of an attribute part disagree.
    pub fn new(kind: ElementKind, qname: QualifiedName) -> Option<Self> {
        let is_attr = kind == ElementKind::Attribute;
        let single = qname.segments().len() == 1;
        if is_attr != qname.is_attribute() || (kind == ElementKind::Association && !single) {
            return None;
        }
        Some(Self { kind, qname })
    }

    pub fn package(qname: QualifiedName) -> Self {
        Self::new(ElementKind::Package, qname).expect("package ref")
    }

    pub fn class(qname: QualifiedName) -> Self {
        Self::new(ElementKind::Class, qname).expect("class ref")
    }

    pub fn attribute(qname: QualifiedName) -> Self {
        Self::new(ElementKind::Attribute, qname).expect("attribute ref")
    }

    pub fn association(name: &str) -> Self {
        Self::new(ElementKind::Association, QualifiedName::simple(name)).expect("association ref")
    }
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} '{}'", self.kind, self.qname)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element<'m> {
    Package(&'m Package),
    Class(&'m ClassDecl),
    Attribute(&'m Attribute),
    Association(&'m Association),
}

impl<'m> Element<'m> {
    pub fn name(&self) -> &'m str {
        match self {
            Element::Package(p) => &p.name,
            Element::Class(c) => &c.name,
            Element::Attribute(a) => &a.name,
            Element::Association(a) => &a.name,
        }
    }

    /// Associations and packages carry no stereotypes.
    pub fn has_stereotype(&self, stereotype: &str) -> bool {
        match self {
            Element::Class(c) => c.stereotypes.contains(stereotype),
            Element::Attribute(a) => a.stereotypes.contains(stereotype),
            _ => false,
        }
    }
}

/// Resolves a reference. A ref whose kind does not match the element found
/// under that name is `None`.
pub fn resolve_ref<'m>(model: &'m Model, r: &ElementRef) -> Option<Element<'m>> {
    match r.kind {
        ElementKind::Association => model
            .associations
            .iter()
            .find(|a| a.name == r.qname.simple_name())
            .map(Element::Association),
        ElementKind::Package => {
            let (first, rest) = r.qname.segments().split_first()?;
            let mut pkg = model.packages.iter().find(|p| &p.name == first)?;
            for seg in rest {
                pkg = pkg.packages.iter().find(|p| &p.name == seg)?;
            }
            Some(Element::Package(pkg))
        }
        ElementKind::Class => {
            let container = r.qname.container()?;
            let Some(Element::Package(pkg)) = resolve_ref(model, &ElementRef::package(container))
            else {
                return None;
            };
            pkg.classes
                .iter()
                .find(|c| c.name == r.qname.simple_name())
                .map(Element::Class)
        }
        ElementKind::Attribute => {
            let class_ref = ElementRef::class(r.qname.container()?);
            let Some(Element::Class(class)) = resolve_ref(model, &class_ref) else {
                return None;
            };
            class.attribute(r.qname.simple_name()).map(Element::Attribute)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{}duplicate {kind} `{name}`", at(pos))]
    Duplicate {
        kind: ElementKind,
        name: String,
        pos: Option<Pos>,
    },
    #[error("{}unresolved {what} `{name}`", at(pos))]
    Unresolved {
        what: &'static str,
        name: String,
        pos: Option<Pos>,
    },
    #[error("{pos}: invalid cardinality: {message}")]
    Cardinality { pos: Pos, message: String },
    #[error("edit #{index}: {message}")]
    Edit { index: usize, message: String },
}

fn at(pos: &Option<Pos>) -> String {
    pos.map(|p| format!("{p}: ")).unwrap_or_default()
}

pub struct PackageEntry<'m> {
    pub qname: QualifiedName,
    pub parent: Option<QualifiedName>,
    pub package: &'m Package,
}

pub struct ClassEntry<'m> {
    pub qname: QualifiedName,
    pub package: QualifiedName,
    pub class: &'m ClassDecl,
}

pub struct AttributeEntry<'m> {
    pub qname: QualifiedName,
    pub class: QualifiedName,
    pub attribute: &'m Attribute,
}

/// Flattened, hash-indexed view of a model. Element vectors keep file order
/// (packages pre-order).
pub struct ModelIndex<'m> {
    model: &'m Model,
    packages: Vec<PackageEntry<'m>>,
    classes: Vec<ClassEntry<'m>>,
    attributes: Vec<AttributeEntry<'m>>,
    lookup: HashMap<ElementRef, usize>,
}

impl<'m> ModelIndex<'m> {
    /// Builds the index of a model already known to be valid.
    pub fn new(model: &'m Model) -> Self {
        Self::build(model, false).expect("unchecked build never fails")
    }

    /// Builds the index, rejecting duplicate qualified names.
    pub fn checked(model: &'m Model) -> Result<Self, ModelError> {
        Self::build(model, true)
    }

    fn build(model: &'m Model, strict: bool) -> Result<Self, ModelError> {
        let mut index = ModelIndex {
            model,
            packages: Vec::new(),
            classes: Vec::new(),
            attributes: Vec::new(),
            lookup: HashMap::new(),
        };
        let mut stack: Vec<(Option<QualifiedName>, &'m Package)> =
            model.packages.iter().rev().map(|p| (None, p)).collect();
        while let Some((parent, pkg)) = stack.pop() {
            let qname = QualifiedName::join(parent.as_ref(), &pkg.name);
            index.insert(ElementRef::package(qname.clone()), index.packages.len(), strict)?;
            for class in &pkg.classes {
                let cq = qname.child(&class.name);
                index.insert(ElementRef::class(cq.clone()), index.classes.len(), strict)?;
                for attr in &class.attributes {
                    let aq = cq.with_attribute(&attr.name);
                    index.insert(ElementRef::attribute(aq.clone()), index.attributes.len(), strict)?;
                    index.attributes.push(AttributeEntry {
                        qname: aq,
                        class: cq.clone(),
                        attribute: attr,
                    });
                }
                index.classes.push(ClassEntry {
                    qname: cq,
                    package: qname.clone(),
                    class,
                });
            }
            for child in pkg.packages.iter().rev() {
                stack.push((Some(qname.clone()), child));
            }
            index.packages.push(PackageEntry {
                qname,
                parent,
                package: pkg,
            });
        }
        for (i, a) in model.associations.iter().enumerate() {
            index.insert(ElementRef::association(&a.name), i, strict)?;
        }
        if strict {
            for c in &index.classes {
                if index.lookup.contains_key(&ElementRef::package(c.qname.clone())) {
                    return Err(dup(ElementKind::Class, &c.qname));
                }
            }
        }
        Ok(index)
    }

    fn insert(&mut self, r: ElementRef, slot: usize, strict: bool) -> Result<(), ModelError> {
        if self.lookup.contains_key(&r) {
            if strict {
                return Err(dup(r.kind, &r.qname));
            }
            return Ok(());
        }
        self.lookup.insert(r, slot);
        Ok(())
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn packages(&self) -> &[PackageEntry<'m>] {
        &self.packages
    }

    pub fn classes(&self) -> &[ClassEntry<'m>] {
        &self.classes
    }

    pub fn attributes(&self) -> &[AttributeEntry<'m>] {
        &self.attributes
    }

    pub fn associations(&self) -> &'m [Association] {
        &self.model.associations
    }

    pub fn package(&self, q: &QualifiedName) -> Option<&PackageEntry<'m>> {
        let r = ElementRef::new(ElementKind::Package, q.clone())?;
        self.lookup.get(&r).map(|&i| &self.packages[i])
    }

    pub fn class(&self, q: &QualifiedName) -> Option<&ClassEntry<'m>> {
        let r = ElementRef::new(ElementKind::Class, q.clone())?;
        self.lookup.get(&r).map(|&i| &self.classes[i])
    }

    pub fn attribute(&self, q: &QualifiedName) -> Option<&AttributeEntry<'m>> {
        let r = ElementRef::new(ElementKind::Attribute, q.clone())?;
        self.lookup.get(&r).map(|&i| &self.attributes[i])
    }

    pub fn association(&self, name: &str) -> Option<&'m Association> {
        self.lookup
            .get(&ElementRef::association(name))
            .map(|&i| &self.model.associations[i])
    }

    pub fn contains(&self, r: &ElementRef) -> bool {
        self.lookup.contains_key(r)
    }

    pub fn resolve(&self, r: &ElementRef) -> Option<Element<'m>> {
        let &i = self.lookup.get(r)?;
        Some(match r.kind {
            ElementKind::Package => Element::Package(self.packages[i].package),
            ElementKind::Class => Element::Class(self.classes[i].class),
            ElementKind::Attribute => Element::Attribute(self.attributes[i].attribute),
            ElementKind::Association => Element::Association(&self.model.associations[i]),
        })
    }

    /// Every element reference of the model, in index order per kind.
    pub fn refs(&self) -> impl Iterator<Item = ElementRef> + '_ {
        self.packages
            .iter()
            .map(|p| ElementRef::package(p.qname.clone()))
            .chain(self.classes.iter().map(|c| ElementRef::class(c.qname.clone())))
            .chain(self.attributes.iter().map(|a| ElementRef::attribute(a.qname.clone())))
            .chain(self.model.associations.iter().map(|a| ElementRef::association(&a.name)))
    }
}

fn dup(kind: ElementKind, q: &QualifiedName) -> ModelError {
    ModelError::Duplicate {
        kind,
        name: q.to_string(),
        pos: None,
    }
}
