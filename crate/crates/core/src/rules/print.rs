use std::fmt::Write;

use super::ast::*;
use super::ext::{ExtensionBody, ExtensionDecl};
use crate::lex::quote;

/// Canonical source form of a rule set; `parse_rules` reads it back to an
/// equal AST.
pub fn print_rules(rs: &RuleSet) -> String {
    let mut out = String::new();
    for (i, r) in rs.rules.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "impactRule {} {{", quote(&r.name, false));
        let _ = writeln!(out, "  description = {}", quote(&r.description, false));
        if let Some(s) = r.severity {
            let _ = writeln!(out, "  severity = {s}");
        }
        if let Some(p) = r.probability {
            let _ = writeln!(out, "  probability = {p}");
        }
        if let Some(rf) = &r.relevant_for {
            let _ = writeln!(out, "  relevantFor = {}", quote(rf, false));
        }
        out.push_str("  impact {\n");
        for e in &r.entries {
            let _ = writeln!(
                out,
                "    {} =>\n      {}",
                print_condition(&e.condition),
                print_template(&e.hint)
            );
        }
        out.push_str("  }\n}\n");
    }
    out
}

pub fn print_extensions(exts: &[ExtensionDecl]) -> String {
    let mut out = String::new();
    for e in exts {
        match &e.body {
            ExtensionBody::Condition(c) => {
                let _ = writeln!(out, "define condition {} = {};", e.name, print_condition(c));
            }
            ExtensionBody::Placeholder { provider, args } => {
                let _ = writeln!(out, "define placeholder {} = {provider}{};", e.name, print_args(args));
            }
        }
    }
    out
}

pub fn print_condition(e: &ConditionExpr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

// Binding strength: || = 1, && = 2, ! and calls = 3. Operators are
// left-associative, so a right operand of equal strength needs parentheses.
fn write_expr(out: &mut String, e: &ConditionExpr, min: u8) {
    let (strength, left_min, right_min) = match e {
        ConditionExpr::Or(..) => (1, 1, 2),
        ConditionExpr::And(..) => (2, 2, 3),
        _ => (3, 3, 3),
    };
    let parens = strength < min;
    if parens {
        out.push('(');
    }
    match e {
        ConditionExpr::Or(a, b) | ConditionExpr::And(a, b) => {
            write_expr(out, a, left_min);
            out.push_str(if strength == 1 { " || " } else { " && " });
            write_expr(out, b, right_min);
        }
        ConditionExpr::Not(a) => {
            out.push('!');
            write_expr(out, a, 3);
        }
        ConditionExpr::Predefined { name, args } => {
            let _ = write!(out, "pc.{name}{}", print_args(args));
        }
        ConditionExpr::User { name, args } => {
            let _ = write!(out, "{name}{}", print_args(args));
        }
    }
    if parens {
        out.push(')');
    }
}

fn print_args(args: &[String]) -> String {
    let quoted: Vec<String> = args.iter().map(|a| quote(a, false)).collect();
    format!("({})", quoted.join(", "))
}

pub fn print_template(t: &HintTemplate) -> String {
    let mut body = String::from("\"");
    for s in t.segments() {
        match s {
            Segment::Literal(text) => {
                let q = quote(text, true);
                body.push_str(&q[1..q.len() - 1]);
            }
            Segment::Placeholder(name) => {
                let _ = write!(body, "{{{name}}}");
            }
        }
    }
    body.push('"');
    body
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::parse_rules;

    #[test]
    fn minimal_parentheses() {
        use ConditionExpr as E;
        let (a, b, c) = (E::user("a"), E::predefined("b"), E::user("c"));
        assert_eq!(print_condition(&E::or(a.clone(), E::and(b.clone(), E::not(c.clone())))), "a() || pc.b() && !c()");
        assert_eq!(print_condition(&E::and(E::or(a.clone(), b.clone()), c.clone())), "(a() || pc.b()) && c()");
        assert_eq!(print_condition(&E::or(a.clone(), E::or(b.clone(), c.clone()))), "a() || (pc.b() || c())");
        assert_eq!(print_condition(&E::not(E::and(a, b))), "!(a() && pc.b())");
    }

    #[test]
    fn template_escapes() {
        let t = HintTemplate::new([
            Segment::Literal("a {b} \"c\"\n".into()),
            Segment::Placeholder("x".into()),
        ]);
        assert_eq!(print_template(&t), r#""a \{b\} \"c\"\n{x}""#);
    }

    #[test]
    fn printed_form_reparses() {
        let src = r#"impactRule "R" { description = "d" severity = minor relevantFor = "ops"
            impact { !(a() || pc.b("x\"y")) => "one {p}" pc.c() => "two\nlines" } }"#;
        let rs = parse_rules(src).unwrap();
        assert_eq!(parse_rules(&print_rules(&rs)).unwrap(), rs);
    }
}
