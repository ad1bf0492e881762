use crate::differ::DiffKind;
use crate::rules::Signature;

use super::{EvalError, EvaluationContext};

/// Persistent sugar: (condition name, underlying kind).
const PERSISTENT: &[(&str, DiffKind)] = &[
    ("addedPersistentClass", DiffKind::AddedClass),
    ("deletedPersistentClass", DiffKind::DeletedClass),
    ("addedPersistentAttribute", DiffKind::AddedAttribute),
    ("deletedPersistentAttribute", DiffKind::DeletedAttribute),
    ("renamedPersistentAttribute", DiffKind::RenamedAttribute),
];

/// Every `pc.` condition with its signature: one per [`DiffKind`], the two
/// element tests and the persistent-stereotype sugar.
pub fn predefined_catalog() -> Vec<(String, Signature)> {
    let mut out: Vec<(String, Signature)> = DiffKind::ALL
        .iter()
        .map(|k| (k.condition_name().to_string(), Signature::args(0)))
        .collect();
    out.push(("elementHasStereotype".into(), Signature::args(1)));
    out.push(("elementNameMatches".into(), Signature::regex()));
    out.extend(PERSISTENT.iter().map(|(n, _)| (n.to_string(), Signature::args(0))));
    out
}

/// Kind-qualified conditions and the kind they test.
pub fn kind_conditions() -> impl Iterator<Item = (&'static str, DiffKind, bool)> {
    DiffKind::ALL
        .iter()
        .map(|k| (k.condition_name(), *k, false))
        .chain(PERSISTENT.iter().map(|(n, k)| (*n, *k, true)))
}

pub fn eval_predefined(name: &str, args: &[String], ctx: &EvaluationContext<'_, '_>) -> Result<bool, EvalError> {
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(EvalError::Arity {
                name: format!("pc.{name}"),
                expected: n,
                got: args.len(),
            })
        }
    };
    let current = ctx.current.kind;
    if let Some(kind) = DiffKind::ALL.iter().find(|k| k.condition_name() == name) {
        arity(0)?;
        return Ok(current == *kind);
    }
    if let Some((_, kind)) = PERSISTENT.iter().find(|(n, _)| *n == name) {
        arity(0)?;
        return Ok(current == *kind && ctx.subject_has_stereotype(&ctx.config.persistent_stereotype));
    }
    match name {
        "elementHasStereotype" => {
            arity(1)?;
            Ok(ctx.subject_has_stereotype(&args[0]))
        }
        "elementNameMatches" => {
            arity(1)?;
            let re = ctx.registry.regex(&args[0])?;
            Ok(re.is_match(ctx.subject_name()))
        }
        _ => Err(EvalError::UnknownPredefined(name.to_string())),
    }
}
