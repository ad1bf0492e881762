use serde::{Deserialize, Serialize};

use super::{
    Association, Attribute, Cardinality, ClassDecl, Model, ModelError, ModelIndex, Package,
    QualifiedName,
};

/// One structural change to a model. Class renames and moves rewrite every
/// superclass and association reference to the class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditOp {
    AddPackage {
        package: QualifiedName,
    },
    AddClass {
        package: QualifiedName,
        class: ClassDecl,
    },
    DeleteClass {
        class: QualifiedName,
    },
    RenameClass {
        class: QualifiedName,
        new_name: String,
    },
    MoveClass {
        class: QualifiedName,
        package: QualifiedName,
    },
    SetSuperclass {
        class: QualifiedName,
        superclass: Option<QualifiedName>,
    },
    AddAttribute {
        class: QualifiedName,
        attribute: Attribute,
    },
    DeleteAttribute {
        attribute: QualifiedName,
    },
    RenameAttribute {
        attribute: QualifiedName,
        new_name: String,
    },
    MoveAttribute {
        attribute: QualifiedName,
        class: QualifiedName,
    },
    RetypeAttribute {
        attribute: QualifiedName,
        type_name: String,
    },
    SetCardinality {
        attribute: QualifiedName,
        cardinality: Cardinality,
    },
    AddStereotype {
        element: QualifiedName,
        stereotype: String,
    },
    RemoveStereotype {
        element: QualifiedName,
        stereotype: String,
    },
    AddAssociation {
        association: Association,
    },
    DeleteAssociation {
        name: String,
    },
    SetAssociationCardinality {
        name: String,
        source_card: Cardinality,
        target_card: Cardinality,
    },
}

/// Applies `edits` in order to a copy of `model`.
pub fn apply_edit_script(model: &Model, edits: &[EditOp]) -> Result<Model, ModelError> {
    let mut m = model.clone();
    for (index, edit) in edits.iter().enumerate() {
        apply_one(&mut m, edit).map_err(|message| ModelError::Edit { index, message })?;
    }
    if !edits.is_empty() {
        m.validate().map_err(|e| ModelError::Edit {
            index: edits.len() - 1,
            message: e.to_string(),
        })?;
    }
    Ok(m)
}

fn missing(what: &str, q: &impl std::fmt::Display) -> String {
    format!("no {what} `{q}`")
}

fn taken(q: &impl std::fmt::Display) -> String {
    format!("name `{q}` already in use")
}

fn name_taken(m: &Model, q: &QualifiedName) -> bool {
    let index = ModelIndex::new(m);
    index.class(q).is_some() || index.package(q).is_some()
}

fn class_referenced(m: &Model, q: &QualifiedName) -> bool {
    let index = ModelIndex::new(m);
    index
        .classes()
        .iter()
        .any(|c| c.class.superclass.as_ref() == Some(q))
        || m.associations.iter().any(|a| &a.source == q || &a.target == q)
}

fn retarget(m: &mut Model, from: &QualifiedName, to: &QualifiedName) {
    fn walk(p: &mut Package, from: &QualifiedName, to: &QualifiedName) {
        for c in &mut p.classes {
            if c.superclass.as_ref() == Some(from) {
                c.superclass = Some(to.clone());
            }
        }
        for child in &mut p.packages {
            walk(child, from, to);
        }
    }
    for p in &mut m.packages {
        walk(p, from, to);
    }
    for a in &mut m.associations {
        if &a.source == from {
            a.source = to.clone();
        }
        if &a.target == from {
            a.target = to.clone();
        }
    }
}

fn take_class(m: &mut Model, q: &QualifiedName) -> Result<ClassDecl, String> {
    let pkg = q
        .container()
        .and_then(|c| m.package_mut(&c))
        .ok_or_else(|| missing("class", q))?;
    let pos = pkg
        .classes
        .iter()
        .position(|c| c.name == q.simple_name())
        .ok_or_else(|| missing("class", q))?;
    Ok(pkg.classes.remove(pos))
}

fn attribute_mut<'m>(m: &'m mut Model, q: &QualifiedName) -> Result<&'m mut Attribute, String> {
    let class = q
        .container()
        .and_then(|c| m.class_mut(&c))
        .ok_or_else(|| missing("attribute", q))?;
    class
        .attributes
        .iter_mut()
        .find(|a| a.name == q.simple_name())
        .ok_or_else(|| missing("attribute", q))
}

fn apply_one(m: &mut Model, edit: &EditOp) -> Result<(), String> {
    match edit {
        EditOp::AddPackage { package } => {
            if name_taken(m, package) {
                return Err(taken(package));
            }
            let new = Package::new(package.simple_name());
            match package.container() {
                None => m.packages.push(new),
                Some(parent) => m
                    .package_mut(&parent)
                    .ok_or_else(|| missing("package", &parent))?
                    .packages
                    .push(new),
            }
        }
        EditOp::AddClass { package, class } => {
            let q = package.child(&class.name);
            if name_taken(m, &q) {
                return Err(taken(&q));
            }
            m.package_mut(package)
                .ok_or_else(|| missing("package", package))?
                .classes
                .push(class.clone());
        }
        EditOp::DeleteClass { class } => {
            take_class(m, class)?;
            if class_referenced(m, class) {
                return Err(format!("class `{class}` is still referenced"));
            }
        }
        EditOp::RenameClass { class, new_name } => {
            let to = class.renamed(new_name);
            if name_taken(m, &to) {
                return Err(taken(&to));
            }
            m.class_mut(class)
                .ok_or_else(|| missing("class", class))?
                .name = new_name.clone();
            retarget(m, class, &to);
        }
        EditOp::MoveClass { class, package } => {
            let to = package.child(class.simple_name());
            if name_taken(m, &to) {
                return Err(taken(&to));
            }
            if m.package_mut(package).is_none() {
                return Err(missing("package", package));
            }
            let c = take_class(m, class)?;
            m.package_mut(package).expect("checked").classes.push(c);
            retarget(m, class, &to);
        }
        EditOp::SetSuperclass { class, superclass } => {
            m.class_mut(class)
                .ok_or_else(|| missing("class", class))?
                .superclass = superclass.clone();
        }
        EditOp::AddAttribute { class, attribute } => {
            let c = m.class_mut(class).ok_or_else(|| missing("class", class))?;
            if c.attribute(&attribute.name).is_some() {
                return Err(taken(&class.with_attribute(&attribute.name)));
            }
            c.attributes.push(attribute.clone());
        }
        EditOp::DeleteAttribute { attribute } => {
            let c = attribute
                .container()
                .and_then(|q| m.class_mut(&q))
                .ok_or_else(|| missing("attribute", attribute))?;
            let before = c.attributes.len();
            c.attributes.retain(|a| a.name != attribute.simple_name());
            if c.attributes.len() == before {
                return Err(missing("attribute", attribute));
            }
        }
        EditOp::RenameAttribute {
            attribute,
            new_name,
        } => {
            let to = attribute.renamed(new_name);
            if attribute_mut(m, &to).is_ok() {
                return Err(taken(&to));
            }
            attribute_mut(m, attribute)?.name = new_name.clone();
        }
        EditOp::MoveAttribute { attribute, class } => {
            let to = class.with_attribute(attribute.simple_name());
            if attribute_mut(m, &to).is_ok() {
                return Err(taken(&to));
            }
            if m.class_mut(class).is_none() {
                return Err(missing("class", class));
            }
            let a = attribute_mut(m, attribute)?.clone();
            apply_one(
                m,
                &EditOp::DeleteAttribute {
                    attribute: attribute.clone(),
                },
            )?;
            m.class_mut(class).expect("checked").attributes.push(a);
        }
        EditOp::RetypeAttribute {
            attribute,
            type_name,
        } => attribute_mut(m, attribute)?.type_name = type_name.clone(),
        EditOp::SetCardinality {
            attribute,
            cardinality,
        } => attribute_mut(m, attribute)?.cardinality = *cardinality,
        EditOp::AddStereotype {
            element,
            stereotype,
        } => {
            let set = if element.is_attribute() {
                &mut attribute_mut(m, element)?.stereotypes
            } else {
                &mut m
                    .class_mut(element)
                    .ok_or_else(|| missing("class", element))?
                    .stereotypes
            };
            set.insert(stereotype.clone());
        }
        EditOp::RemoveStereotype {
            element,
            stereotype,
        } => {
            let set = if element.is_attribute() {
                &mut attribute_mut(m, element)?.stereotypes
            } else {
                &mut m
                    .class_mut(element)
                    .ok_or_else(|| missing("class", element))?
                    .stereotypes
            };
            if !set.remove(stereotype) {
                return Err(format!("`{element}` has no stereotype `{stereotype}`"));
            }
        }
        EditOp::AddAssociation { association } => {
            if m.associations.iter().any(|a| a.name == association.name) {
                return Err(taken(&association.name));
            }
            m.associations.push(association.clone());
        }
        EditOp::DeleteAssociation { name } => {
            let before = m.associations.len();
            m.associations.retain(|a| &a.name != name);
            if m.associations.len() == before {
                return Err(missing("association", name));
            }
        }
        EditOp::SetAssociationCardinality {
            name,
            source_card,
            target_card,
        } => {
            let a = m
                .associations
                .iter_mut()
                .find(|a| &a.name == name)
                .ok_or_else(|| missing("association", name))?;
            a.source_card = *source_card;
            a.target_card = *target_card;
        }
    }
    Ok(())
}
