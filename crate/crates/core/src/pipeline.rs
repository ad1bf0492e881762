//! End-to-end run: parse models, diff with presettings, load rules and
//! extensions, evaluate, render. The command line is a thin shell over
//! [`run`].

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::builtin::{
    builtin_extensions, builtin_rules, parse_orm_file, parse_property_file, register_builtin_natives, sql_scan,
    BuiltinConfig, NamingConvention, ScanOptions,
};
use crate::checklist::{render_structured, render_text, Checklist, RenderMode};
use crate::differ::{diff_models, export_json, export_records, parse_presettings, MatchConfig, PresettingSet};
use crate::engine::{evaluate_all, EngineConfig, EvalError, ExtensionRegistry, Filters, UnresolvedPolicy};
use crate::model::{parse_model, Model};
use crate::rules::{merge_rule_sets, parse_extensions, parse_rules, validate, DiagCode, RuleSet};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub old: PathBuf,
    pub new: PathBuf,
    pub presettings: Option<PathBuf>,
    /// Concatenated in order, after the shipped rules when those are on.
    pub rules: Vec<PathBuf>,
    pub builtin_rules: bool,
    pub extensions: Vec<PathBuf>,
    pub mode: RenderMode,
    pub filters: Filters,
    pub policy: UnresolvedPolicy,
    pub threshold: Option<f64>,
    pub naming: NamingConvention,
    pub orm_file: Option<PathBuf>,
    pub property_file: Option<PathBuf>,
    pub sources: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
    /// `.json` selects the structured export, anything else the records.
    pub diff_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(old: impl Into<PathBuf>, new: impl Into<PathBuf>) -> Self {
        Self {
            old: old.into(),
            new: new.into(),
            presettings: None,
            rules: Vec::new(),
            builtin_rules: false,
            extensions: Vec::new(),
            mode: RenderMode::Short,
            filters: Filters::default(),
            policy: UnresolvedPolicy::default(),
            threshold: None,
            naming: NamingConvention::default(),
            orm_file: None,
            property_file: None,
            sources: None,
            out: None,
            json_out: None,
            diff_out: None,
        }
    }

    pub fn check(&self) -> Result<(), RunError> {
        if self.old == self.new {
            return Err(RunError::Config(format!(
                "old and new model must be different files, both are {}",
                self.old.display()
            )));
        }
        if self.rules.is_empty() && !self.builtin_rules {
            return Err(RunError::Config("no rules: pass --rules or --builtin-rules".into()));
        }
        if let Some(t) = self.threshold {
            if !(t > 0.0 && t <= 1.0) {
                return Err(RunError::Config(format!("threshold {t} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },
    #[error("{}", diagnostics.join("\n"))]
    Invalid { diagnostics: Vec<String> },
    #[error("{0}")]
    Unresolved(String),
    #[error("{0}")]
    Eval(EvalError),
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// 2 for unresolved names under the fail policy, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Unresolved(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub checklist: Checklist,
    /// The rendered text checklist, also written to `out` when set.
    pub text: String,
    /// Validation warnings, one line each.
    pub warnings: Vec<String>,
    pub differences: usize,
}

fn read(path: &Path) -> Result<String, RunError> {
    fs::read_to_string(path).map_err(|e| RunError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn input_err(path: &Path, e: impl std::fmt::Display) -> RunError {
    RunError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn write(path: &Path, text: &str) -> Result<(), RunError> {
    fs::write(path, text).map_err(|source| RunError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn load_model(path: &Path) -> Result<Model, RunError> {
    let m = parse_model(&read(path)?).map_err(|e| input_err(path, e))?;
    m.validate().map_err(|e| input_err(path, e))?;
    Ok(m)
}

fn load_rules(cfg: &RunConfig) -> Result<RuleSet, RunError> {
    let mut sets = Vec::new();
    let mut origin: HashMap<String, String> = HashMap::new();
    if cfg.builtin_rules {
        let rs = builtin_rules();
        for r in &rs.rules {
            origin.insert(r.name.clone(), "the builtin rules".into());
        }
        sets.push(rs);
    }
    for path in &cfg.rules {
        let rs = parse_rules(&read(path)?).map_err(|e| input_err(path, e))?;
        for r in &rs.rules {
            if let Some(first) = origin.insert(r.name.clone(), path.display().to_string()) {
                return Err(input_err(
                    path,
                    format!("rule \"{}\" is already defined in {first}", r.name),
                ));
            }
        }
        sets.push(rs);
    }
    Ok(merge_rule_sets(sets).expect("names checked above"))
}

/// Runs the whole pipeline and writes the requested files.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    cfg.check()?;
    let old = load_model(&cfg.old)?;
    let new = load_model(&cfg.new)?;
    let presets = match &cfg.presettings {
        Some(p) => parse_presettings(&read(p)?).map_err(|e| input_err(p, e))?,
        None => PresettingSet::default(),
    };
    let rules = load_rules(cfg)?;

    let mut builtin = BuiltinConfig {
        naming: cfg.naming,
        ..BuiltinConfig::default()
    };
    if let Some(p) = &cfg.orm_file {
        builtin.orm = Some(parse_orm_file(&read(p)?).map_err(|e| input_err(p, e))?);
    }
    if let Some(p) = &cfg.property_file {
        let mut pf = parse_property_file(&read(p)?).map_err(|e| input_err(p, e))?;
        pf.name = p.file_name().map(|n| n.to_string_lossy().into_owned());
        builtin.properties = Some(pf);
    }

    let match_cfg = MatchConfig {
        threshold: cfg.threshold.unwrap_or(MatchConfig::default().threshold),
    };
    let dm = diff_models(&old, &new, &presets, &match_cfg).map_err(|e| match &cfg.presettings {
        Some(p) => input_err(p, e),
        None => RunError::Config(e.to_string()),
    })?;

    let engine = EngineConfig::default();
    if let Some(root) = &cfg.sources {
        let opts = ScanOptions {
            naming: cfg.naming,
            persistent_stereotype: engine.persistent_stereotype.clone(),
            ..ScanOptions::default()
        };
        builtin.sql = Some(sql_scan(&dm, root, &opts).map_err(|e| input_err(root, e))?);
        builtin.source_root = Some(root.clone());
    }

    let mut reg = ExtensionRegistry::new();
    register_builtin_natives(&mut reg, builtin);
    if cfg.builtin_rules {
        reg.declare(&builtin_extensions()).expect("shipped extensions declare cleanly");
    }
    for p in &cfg.extensions {
        let exts = parse_extensions(&read(p)?).map_err(|e| input_err(p, e))?;
        reg.declare(&exts).map_err(|e| input_err(p, e))?;
    }

    let diags = validate(&rules, reg.declarations(), &reg.known_names());
    let (errors, warnings): (Vec<_>, Vec<_>) = diags.into_iter().partition(|d| d.is_error());
    if !errors.is_empty() {
        return Err(RunError::Invalid {
            diagnostics: errors.iter().map(ToString::to_string).collect(),
        });
    }
    if cfg.policy == UnresolvedPolicy::Fail {
        let unresolved: Vec<String> = warnings
            .iter()
            .filter(|d| matches!(d.code, DiagCode::UnresolvedCondition | DiagCode::UnresolvedPlaceholder))
            .map(ToString::to_string)
            .collect();
        if !unresolved.is_empty() {
            return Err(RunError::Unresolved(unresolved.join("\n")));
        }
    }

    let hints = evaluate_all(&rules, &dm, &reg, &engine, cfg.policy, &cfg.filters).map_err(|e| {
        if e.is_unresolved() {
            RunError::Unresolved(e.to_string())
        } else {
            RunError::Eval(e)
        }
    })?;
    let checklist = Checklist::build(&rules, hints);
    let text = render_text(&checklist, cfg.mode);

    if let Some(p) = &cfg.out {
        write(p, &text)?;
    }
    if let Some(p) = &cfg.json_out {
        write(p, &render_structured(&checklist))?;
    }
    if let Some(p) = &cfg.diff_out {
        let json = p.extension().is_some_and(|e| e == "json");
        write(p, &if json { export_json(&dm) } else { export_records(&dm) })?;
    }
    Ok(RunOutput {
        checklist,
        text,
        warnings: warnings.iter().map(ToString::to_string).collect(),
        differences: dm.len(),
    })
}
