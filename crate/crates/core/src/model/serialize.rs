use std::fmt::Write;

use super::{Attribute, Cardinality, ClassDecl, Model, Package};

/// Renders a model as `.cd` text. Output is deterministic and re-parses to a
/// structurally equal model.
pub fn serialize_model(model: &Model) -> String {
    let mut out = String::new();
    for pkg in &model.packages {
        write_package(&mut out, pkg, 0);
    }
    for a in &model.associations {
        let _ = writeln!(
            out,
            "association {} {} {} -> {} {}",
            a.name, a.source_card, a.source, a.target_card, a.target
        );
    }
    if out.is_empty() {
        out.push('\n');
    }
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn stereos<'a>(out: &mut String, set: impl IntoIterator<Item = &'a String>) {
    for s in set {
        let _ = write!(out, "<<{s}>> ");
    }
}

fn write_package(out: &mut String, pkg: &Package, depth: usize) {
    indent(out, depth);
    let _ = writeln!(out, "package {} {{", pkg.name);
    for child in &pkg.packages {
        write_package(out, child, depth + 1);
    }
    for class in &pkg.classes {
        write_class(out, class, depth + 1);
    }
    indent(out, depth);
    out.push_str("}\n");
}

fn write_class(out: &mut String, class: &ClassDecl, depth: usize) {
    indent(out, depth);
    stereos(out, &class.stereotypes);
    let _ = write!(out, "class {}", class.name);
    if let Some(sup) = &class.superclass {
        let _ = write!(out, " extends {sup}");
    }
    if class.attributes.is_empty() {
        out.push_str(" {}\n");
        return;
    }
    out.push_str(" {\n");
    for attr in &class.attributes {
        write_attribute(out, attr, depth + 1);
    }
    indent(out, depth);
    out.push_str("}\n");
}

fn write_attribute(out: &mut String, attr: &Attribute, depth: usize) {
    indent(out, depth);
    stereos(out, &attr.stereotypes);
    let _ = write!(out, "{}: {}", attr.name, attr.type_name);
    if attr.cardinality != Cardinality::ONE {
        let _ = write!(out, " {}", attr.cardinality);
    }
    out.push('\n');
}
