use std::collections::{BTreeSet, HashSet};

use super::{
    Association, Attribute, Cardinality, ClassDecl, ElementKind, Model, ModelError, ModelIndex,
    Package, QualifiedName,
};
use crate::lex::{Cursor, Pos};

/// Parses `.cd` model text. Duplicate names and dangling references are
/// reported with the position of the offending declaration.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let mut p = ModelParser {
        cur: Cursor::new(text)?,
        refs: Vec::new(),
    };
    let mut model = Model::default();
    let mut top_names = HashSet::new();
    while p.cur.is_keyword("package") {
        let (pkg, pos) = p.package(None)?;
        if !top_names.insert(pkg.name.clone()) {
            return Err(ModelError::Duplicate {
                kind: ElementKind::Package,
                name: pkg.name,
                pos: Some(pos),
            });
        }
        model.packages.push(pkg);
    }
    let mut assoc_names = HashSet::new();
    while p.cur.is_keyword("association") {
        let (assoc, pos) = p.association()?;
        if !assoc_names.insert(assoc.name.clone()) {
            return Err(ModelError::Duplicate {
                kind: ElementKind::Association,
                name: assoc.name,
                pos: Some(pos),
            });
        }
        model.associations.push(assoc);
    }
    if !p.cur.at_eof() {
        return Err(p.cur.error("`package` or `association`").into());
    }

    let index = ModelIndex::checked(&model)?;
    for (what, target, pos) in &p.refs {
        if index.class(target).is_none() {
            return Err(ModelError::Unresolved {
                what,
                name: target.to_string(),
                pos: Some(*pos),
            });
        }
    }
    Ok(model)
}

struct ModelParser {
    cur: Cursor,
    refs: Vec<(&'static str, QualifiedName, Pos)>,
}

impl ModelParser {
    fn package(&mut self, parent: Option<&QualifiedName>) -> Result<(Package, Pos), ModelError> {
        let pos = self.cur.expect_keyword("package")?;
        let (name, _) = self.cur.expect_ident("package name")?;
        let qname = QualifiedName::join(parent, &name);
        self.cur.expect_sym("{")?;
        let mut pkg = Package::new(name);
        let mut names = HashSet::new();
        loop {
            if self.cur.eat_sym("}") {
                break;
            }
            let (child_name, child_pos, kind) = if self.cur.is_keyword("package") {
                let (child, child_pos) = self.package(Some(&qname))?;
                let n = child.name.clone();
                pkg.packages.push(child);
                (n, child_pos, ElementKind::Package)
            } else if self.cur.is_keyword("class") || self.cur.is_sym("<<") {
                let (class, class_pos) = self.class(&qname)?;
                let n = class.name.clone();
                pkg.classes.push(class);
                (n, class_pos, ElementKind::Class)
            } else {
                return Err(self.cur.error("`package`, `class`, `<<` or `}`").into());
            };
            if !names.insert(child_name.clone()) {
                return Err(ModelError::Duplicate {
                    kind,
                    name: qname.child(child_name).to_string(),
                    pos: Some(child_pos),
                });
            }
        }
        Ok((pkg, pos))
    }

    fn stereotypes(&mut self) -> Result<BTreeSet<String>, ModelError> {
        let mut out = BTreeSet::new();
        while self.cur.eat_sym("<<") {
            let (s, _) = self.cur.expect_ident("stereotype name")?;
            self.cur.expect_sym(">>")?;
            out.insert(s);
        }
        Ok(out)
    }

    fn class(&mut self, package: &QualifiedName) -> Result<(ClassDecl, Pos), ModelError> {
        let pos = self.cur.pos();
        let stereotypes = self.stereotypes()?;
        self.cur.expect_keyword("class")?;
        let (name, _) = self.cur.expect_ident("class name")?;
        let mut class = ClassDecl::new(name);
        class.stereotypes = stereotypes;
        if self.cur.is_keyword("extends") {
            self.cur.advance();
            let sup_pos = self.cur.pos();
            let sup = self.qname()?;
            self.refs.push(("superclass", sup.clone(), sup_pos));
            class.superclass = Some(sup);
        }
        self.cur.expect_sym("{")?;
        let mut names = HashSet::new();
        while !self.cur.eat_sym("}") {
            let attr_pos = self.cur.pos();
            let attr = self.attribute()?;
            if !names.insert(attr.name.clone()) {
                return Err(ModelError::Duplicate {
                    kind: ElementKind::Attribute,
                    name: package.child(&class.name).with_attribute(&attr.name).to_string(),
                    pos: Some(attr_pos),
                });
            }
            class.attributes.push(attr);
        }
        Ok((class, pos))
    }

    fn attribute(&mut self) -> Result<Attribute, ModelError> {
        let stereotypes = self.stereotypes()?;
        let (name, _) = self.cur.expect_ident("attribute name, `<<` or `}`")?;
        self.cur.expect_sym(":")?;
        let (type_name, _) = self.cur.expect_ident("type name")?;
        let cardinality = if self.cur.is_sym("[") {
            self.cardinality()?
        } else {
            Cardinality::ONE
        };
        Ok(Attribute {
            name,
            type_name,
            cardinality,
            stereotypes,
        })
    }

    fn cardinality(&mut self) -> Result<Cardinality, ModelError> {
        let pos = self.cur.expect_sym("[")?;
        let lower = self.bound()?;
        let upper = if self.cur.eat_sym("..") {
            if self.cur.eat_sym("*") {
                None
            } else {
                Some(self.bound()?)
            }
        } else {
            Some(lower)
        };
        self.cur.expect_sym("]")?;
        Cardinality::new(lower, upper).ok_or_else(|| ModelError::Cardinality {
            pos,
            message: "lower bound exceeds upper bound".into(),
        })
    }

    fn bound(&mut self) -> Result<u32, ModelError> {
        let pos = self.cur.pos();
        let n = self.cur.expect_int()?;
        u32::try_from(n).map_err(|_| ModelError::Cardinality {
            pos,
            message: format!("bound {n} too large"),
        })
    }

    fn qname(&mut self) -> Result<QualifiedName, ModelError> {
        let (first, _) = self.cur.expect_ident("qualified name")?;
        let mut segments = vec![first];
        while self.cur.eat_sym(".") {
            segments.push(self.cur.expect_ident("identifier after `.`")?.0);
        }
        Ok(QualifiedName::new(segments))
    }

    fn association(&mut self) -> Result<(Association, Pos), ModelError> {
        let pos = self.cur.expect_keyword("association")?;
        let (name, _) = self.cur.expect_ident("association name")?;
        let source_card = self.cardinality()?;
        let source_pos = self.cur.pos();
        let source = self.qname()?;
        self.cur.expect_sym("->")?;
        let target_card = self.cardinality()?;
        let target_pos = self.cur.pos();
        let target = self.qname()?;
        self.refs.push(("association source", source.clone(), source_pos));
        self.refs.push(("association target", target.clone(), target_pos));
        Ok((
            Association {
                name,
                source,
                target,
                source_card,
                target_card,
            },
            pos,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lex::Pos;

    #[test]
    fn parses_trouble_code_model() {
        let m = parse_model("package de { class TroubleCd { name: String [1] } }").unwrap();
        assert_eq!(m.packages.len(), 1);
        let class = &m.packages[0].classes[0];
        assert_eq!(class.name, "TroubleCd");
        assert_eq!(class.attributes[0].name, "name");
        assert_eq!(class.attributes[0].cardinality, Cardinality::ONE);
    }

    #[test]
    fn empty_input_is_empty_model() {
        assert_eq!(parse_model("").unwrap(), Model::default());
        assert_eq!(parse_model("  // nothing\n").unwrap(), Model::default());
    }

    #[test]
    fn duplicate_class_is_rejected_with_position() {
        let err = parse_model("package p {\n class A {}\n class A {}\n}").unwrap_err();
        assert_eq!(
            err,
            ModelError::Duplicate {
                kind: ElementKind::Class,
                name: "p.A".into(),
                pos: Some(Pos { line: 3, column: 2 })
            }
        );
    }

    #[test]
    fn class_and_package_may_not_share_a_name() {
        assert!(parse_model("package p { class A {} package A {} }").is_err());
    }

    #[test]
    fn duplicates_elsewhere() {
        assert!(parse_model("package p {} package p {}").is_err());
        assert!(parse_model("package p { class A { x: T y: T x: U } }").is_err());
        let text = "package p { class A {} class B {} }
            association R [1] p.A -> [1] p.B
            association R [1] p.B -> [1] p.A";
        assert!(matches!(
            parse_model(text),
            Err(ModelError::Duplicate { kind: ElementKind::Association, .. })
        ));
    }

    #[test]
    fn stereotypes_superclass_and_associations() {
        let text = "package de { package test {
                <<persistent>> <<active>> class ECU extends de.test.Base {
                    <<persistent>> code: String [0..1]
                    tags: String [0..*]
                }
                class Base {}
            } }
            association Has [1] de.test.ECU -> [2..5] de.test.Base";
        let m = parse_model(text).unwrap();
        let ecu = &m.packages[0].packages[0].classes[0];
        assert!(ecu.stereotypes.contains("persistent") && ecu.stereotypes.contains("active"));
        assert_eq!(ecu.superclass.as_ref().unwrap().to_string(), "de.test.Base");
        assert_eq!(ecu.attributes[1].cardinality, Cardinality::many(0));
        assert_eq!(m.associations[0].target_card, Cardinality::new(2, Some(5)).unwrap());
    }

    #[test]
    fn unresolved_references() {
        let err = parse_model("package p { class A extends p.Nope {} }").unwrap_err();
        assert!(matches!(err, ModelError::Unresolved { what: "superclass", .. }));
        let err = parse_model("package p { class A {} }\nassociation R [1] p.A -> [1] p.B")
            .unwrap_err();
        assert_eq!(
            err,
            ModelError::Unresolved {
                what: "association target",
                name: "p.B".into(),
                pos: Some(Pos { line: 2, column: 30 })
            }
        );
    }

    #[test]
    fn syntax_errors_carry_expectations() {
        let err = parse_model("package p { class A { x String } }").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("1:25"), "{msg}");
        assert!(msg.contains("expected `:`"), "{msg}");
        assert!(parse_model("package p { class A { x: T [3..1] } }").is_err());
    }
}
