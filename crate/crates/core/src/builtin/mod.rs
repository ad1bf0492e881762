//! The shipped rule pack: XML migration, SQL query, ORM file and property
//! file analyses.
//!
//! The rules are ordinary `.ir`/`.irx` sources evaluated by the engine. This
//! module only supplies what they cannot express: artifact parsers, the SQL
//! scanner, and the native conditions and providers that read them.

mod naming;
mod orm;
mod properties;
mod sql;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

pub use naming::{to_column_name, to_table_name, NamingConvention};
pub use orm::{parse_orm_file, OrmEntry, OrmError, OrmMapping, OrmMappingFile};
pub use properties::{parse_property_file, property_key, PropertyError, PropertyFile};
pub use sql::{contains_word, is_ident_char, scan_target, sql_scan, ScanOptions, SqlScan, SqlScanHit, DEFAULT_EXTENSIONS};

use crate::differ::{DiffKind, DiffModel, ModelDifference};
use crate::engine::{evaluate_all, ChecklistHint, EngineConfig, EvaluationContext, ExtensionRegistry, Filters, UnresolvedPolicy};
use crate::model::ElementKind;
use crate::rules::{parse_extensions, parse_rules, ExtError, ExtensionDecl, RuleSet, Signature};

pub const RULES_SOURCE: &str = include_str!("../../rules/builtin.ir");
pub const EXTENSIONS_SOURCE: &str = include_str!("../../rules/builtin.irx");

pub const XML_RULE: &str = "XML migration analysis";
pub const SQL_RULE: &str = "SQL query analysis";
pub const ORM_RULE: &str = "ORM file analysis";
pub const PROPERTY_RULE: &str = "Property file analysis";

pub const DEFAULT_PROPERTY_FILE: &str = "core.properties";

pub fn builtin_rules() -> RuleSet {
    parse_rules(RULES_SOURCE).expect("shipped rules parse")
}

pub fn builtin_extensions() -> Vec<ExtensionDecl> {
    parse_extensions(EXTENSIONS_SOURCE).expect("shipped extensions parse")
}

/// Artifacts the shipped rules consult. All optional: a missing ORM file
/// leaves excerpts unresolved, a missing property file means every key is
/// missing, no scan means no SQL hints.
#[derive(Debug, Clone)]
pub struct BuiltinConfig {
    pub naming: NamingConvention,
    pub orm: Option<OrmMappingFile>,
    pub properties: Option<PropertyFile>,
    /// Shown in property hints when the property file has no name of its own.
    pub property_file_name: String,
    pub sql: Option<SqlScan>,
    /// Root the SQL hit paths are shown relative to.
    pub source_root: Option<PathBuf>,
}

impl Default for BuiltinConfig {
    fn default() -> Self {
        Self {
            naming: NamingConvention::default(),
            orm: None,
            properties: None,
            property_file_name: DEFAULT_PROPERTY_FILE.into(),
            sql: None,
            source_root: None,
        }
    }
}

struct Artifacts {
    cfg: BuiltinConfig,
    sql_index: HashMap<ModelDifference, Vec<usize>>,
}

impl Artifacts {
    fn hits<'a>(&'a self, d: &ModelDifference) -> impl Iterator<Item = &'a SqlScanHit> {
        let idx = self.sql_index.get(d).map(Vec::as_slice).unwrap_or(&[]);
        let hits = self.cfg.sql.as_ref().map(|s| s.hits.as_slice()).unwrap_or(&[]);
        idx.iter().map(move |&i| &hits[i])
    }

    fn property_key(&self, ctx: &EvaluationContext<'_, '_>, suffix: &str) -> String {
        property_key(ctx.subject_name(), suffix)
    }
}

/// Registers the native conditions and providers the shipped rules use and
/// declares the shipped `.irx`.
pub fn register_builtins(reg: &mut ExtensionRegistry, cfg: BuiltinConfig) -> Result<(), ExtError> {
    register_builtin_natives(reg, cfg);
    reg.declare(&builtin_extensions())
}

/// Only the native half: user rules may call the artifact-backed conditions
/// and providers without pulling in the shipped declarations.
pub fn register_builtin_natives(reg: &mut ExtensionRegistry, cfg: BuiltinConfig) {
    let mut sql_index: HashMap<ModelDifference, Vec<usize>> = HashMap::new();
    if let Some(scan) = &cfg.sql {
        for (i, h) in scan.hits.iter().enumerate() {
            sql_index.entry(h.cause.clone()).or_default().push(i);
        }
    }
    let art = Arc::new(Artifacts { cfg, sql_index });

    let a = art.clone();
    reg.register_provider("orm.excerpt", 0, move |ctx, _| {
        let orm = a.cfg.orm.as_ref()?;
        orm.entry_for(&ctx.current.subject.qname).map(|e| e.text.clone())
    });
    let a = art.clone();
    reg.register_provider("property.fileName", 0, move |_, _| {
        let own = a.cfg.properties.as_ref().and_then(|p| p.name.clone());
        Some(own.unwrap_or_else(|| a.cfg.property_file_name.clone()))
    });
    let a = art.clone();
    reg.register_provider("property.key", 1, move |ctx, args| Some(a.property_key(ctx, &args[0])));
    let a = art.clone();
    reg.register_condition("propertyKeyMissing", Signature::args(1), move |ctx, args| {
        let key = a.property_key(ctx, &args[0]);
        !a.cfg.properties.as_ref().is_some_and(|p| p.contains(&key))
    });
    let a = art.clone();
    reg.register_condition("propertyKeyPresent", Signature::args(1), move |ctx, args| {
        let key = a.property_key(ctx, &args[0]);
        a.cfg.properties.as_ref().is_some_and(|p| p.contains(&key))
    });

    let a = art.clone();
    reg.register_condition("sqlReferencesFound", Signature::args(0), move |ctx, _| {
        a.hits(ctx.current).next().is_some()
    });
    let a = art.clone();
    reg.register_provider("sql.identifier", 0, move |ctx, _| {
        if let Some(h) = a.hits(ctx.current).next() {
            return Some(h.identifier.clone());
        }
        let name = ctx.subject_name();
        match ctx.current.subject.kind {
            ElementKind::Class => Some(to_table_name(name, a.cfg.naming)),
            ElementKind::Attribute => Some(to_column_name(name, a.cfg.naming)),
            _ => None,
        }
    });
    let a = art.clone();
    reg.register_provider("sql.hits", 0, move |ctx, _| {
        let shown: Vec<String> = a
            .hits(ctx.current)
            .map(|h| {
                let path = match &a.cfg.source_root {
                    Some(root) => h.path.strip_prefix(root).unwrap_or(&h.path),
                    None => &h.path,
                };
                format!("{}:{}", path.display(), h.line)
            })
            .collect();
        (!shown.is_empty()).then(|| shown.join(", "))
    });

    reg.register_condition("cardinalityNarrowed", Signature::args(0), |ctx, _| {
        let d = ctx.current;
        let (Some(old), Some(new)) = (
            ctx.old.attribute(&d.subject.qname),
            d.counterpart.as_ref().and_then(|c| ctx.new.attribute(&c.qname)),
        ) else {
            return false;
        };
        old.attribute.cardinality.narrowed_by(&new.attribute.cardinality)
    });
    reg.register_provider("migration.stub", 0, |ctx, _| migration_stub(ctx.current));
}

/// A ready-to-adapt rename step for stored XML, one line.
pub fn migration_stub(d: &ModelDifference) -> Option<String> {
    let new = d.new_value.as_deref()?;
    match d.kind {
        DiffKind::RenamedAttribute => Some(format!(
            "<rename-element class=\"{}\" from=\"{}\" to=\"{new}\"/>",
            d.subject.qname.container()?,
            d.subject.qname.simple_name()
        )),
        DiffKind::RenamedClass => Some(format!(
            "<rename-element from=\"{}\" to=\"{new}\"/>",
            d.subject.qname
        )),
        _ => None,
    }
}

pub fn builtin_registry(cfg: BuiltinConfig) -> ExtensionRegistry {
    let mut reg = ExtensionRegistry::new();
    register_builtins(&mut reg, cfg).expect("shipped extensions declare cleanly");
    reg
}

fn run_single(rule: &str, dm: &DiffModel<'_>, cfg: BuiltinConfig) -> Vec<ChecklistHint> {
    let rs = RuleSet {
        rules: builtin_rules().rules.into_iter().filter(|r| r.name == rule).collect(),
    };
    let reg = builtin_registry(cfg);
    evaluate_all(
        &rs,
        dm,
        &reg,
        &EngineConfig::default(),
        UnresolvedPolicy::Flag,
        &Filters::default(),
    )
    .expect("flag policy never fails on the shipped rules")
}

pub fn orm_analysis(dm: &DiffModel<'_>, orm: Option<&OrmMappingFile>) -> Vec<ChecklistHint> {
    let cfg = BuiltinConfig {
        orm: orm.cloned(),
        ..BuiltinConfig::default()
    };
    run_single(ORM_RULE, dm, cfg)
}

pub fn property_key_analysis(dm: &DiffModel<'_>, pf: Option<&PropertyFile>) -> Vec<ChecklistHint> {
    let cfg = BuiltinConfig {
        properties: pf.cloned(),
        ..BuiltinConfig::default()
    };
    run_single(PROPERTY_RULE, dm, cfg)
}

pub fn xml_migration_analysis(dm: &DiffModel<'_>) -> Vec<ChecklistHint> {
    run_single(XML_RULE, dm, BuiltinConfig::default())
}

/// SQL hints for an existing scan.
pub fn sql_query_analysis(dm: &DiffModel<'_>, scan: &SqlScan, source_root: Option<PathBuf>) -> Vec<ChecklistHint> {
    let cfg = BuiltinConfig {
        sql: Some(scan.clone()),
        source_root,
        ..BuiltinConfig::default()
    };
    run_single(SQL_RULE, dm, cfg)
}

#[cfg(test)]
mod tests;
