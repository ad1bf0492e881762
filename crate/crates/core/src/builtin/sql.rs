//! Lexical search for table and column identifiers of renamed or deleted
//! persistent elements. Not a SQL parser: a hit is any case-sensitive
//! occurrence delimited by non-identifier characters.

use std::collections::BTreeSet;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use super::naming::{to_column_name, to_table_name, NamingConvention};
use crate::differ::{DiffKind, DiffModel, ModelDifference};
use crate::model::{ElementKind, ModelIndex};

pub const DEFAULT_EXTENSIONS: &[&str] = &["java", "sql", "xml", "properties", "txt"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    /// File extensions without the dot.
    pub extensions: Vec<String>,
    pub naming: NamingConvention,
    pub persistent_stereotype: String,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            extensions: DEFAULT_EXTENSIONS.iter().map(|s| s.to_string()).collect(),
            naming: NamingConvention::default(),
            persistent_stereotype: "persistent".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqlScanHit {
    pub path: PathBuf,
    /// 1-based.
    pub line: usize,
    pub identifier: String,
    pub cause: ModelDifference,
}

#[derive(Debug, Clone, Default)]
pub struct SqlScan {
    pub hits: Vec<SqlScanHit>,
    /// Files that could not be read, with the reason.
    pub skipped: Vec<(PathBuf, String)>,
}

impl SqlScan {
    pub fn hits_for<'a>(&'a self, d: &'a ModelDifference) -> impl Iterator<Item = &'a SqlScanHit> {
        self.hits.iter().filter(move |h| &h.cause == d)
    }
}

/// The identifier a difference's old element is stored under, if the
/// difference renames or deletes a persistent class or attribute.
pub fn scan_target(d: &ModelDifference, old: &ModelIndex<'_>, opts: &ScanOptions) -> Option<String> {
    if !matches!(
        d.kind,
        DiffKind::RenamedClass | DiffKind::DeletedClass | DiffKind::RenamedAttribute | DiffKind::DeletedAttribute
    ) {
        return None;
    }
    let persistent = old
        .resolve(&d.subject)
        .is_some_and(|e| e.has_stereotype(&opts.persistent_stereotype));
    if !persistent {
        return None;
    }
    let name = d.subject.qname.simple_name();
    Some(match d.subject.kind {
        ElementKind::Attribute => to_column_name(name, opts.naming),
        _ => to_table_name(name, opts.naming),
    })
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// True when `ident` occurs in `line` with no identifier character directly
/// before or after it.
pub fn contains_word(line: &str, ident: &str) -> bool {
    if ident.is_empty() {
        return false;
    }
    line.match_indices(ident).any(|(i, _)| {
        let before = line[..i].chars().next_back();
        let after = line[i + ident.len()..].chars().next();
        !before.is_some_and(is_ident_char) && !after.is_some_and(is_ident_char)
    })
}

pub fn sql_scan(dm: &DiffModel<'_>, source_root: &Path, opts: &ScanOptions) -> io::Result<SqlScan> {
    let old = ModelIndex::new(dm.old);
    let targets: Vec<(String, &ModelDifference)> = dm
        .differences()
        .iter()
        .filter_map(|d| scan_target(d, &old, opts).map(|id| (id, d)))
        .collect();
    if !source_root.is_dir() {
        return Err(io::Error::new(
            io::ErrorKind::NotFound,
            format!("{} is not a directory", source_root.display()),
        ));
    }
    if targets.is_empty() {
        return Ok(SqlScan::default());
    }

    let extensions: BTreeSet<&str> = opts.extensions.iter().map(|e| e.trim_start_matches('.')).collect();
    let mut files = Vec::new();
    let mut skipped = Vec::new();
    for entry in WalkDir::new(source_root).follow_links(false) {
        match entry {
            Ok(e) if e.file_type().is_file() => {
                let ext = e.path().extension().and_then(|x| x.to_str()).unwrap_or("");
                if extensions.contains(ext) {
                    files.push(e.into_path());
                }
            }
            Ok(_) => {}
            Err(err) => skipped.push((err.path().map(Path::to_path_buf).unwrap_or_default(), err.to_string())),
        }
    }

    let per_file: Vec<Result<Vec<SqlScanHit>, (PathBuf, String)>> = files
        .par_iter()
        .map(|path| {
            let bytes = std::fs::read(path).map_err(|e| (path.clone(), e.to_string()))?;
            let text = String::from_utf8_lossy(&bytes);
            let mut hits = Vec::new();
            for (i, line) in text.lines().enumerate() {
                for (ident, cause) in &targets {
                    if contains_word(line, ident) {
                        hits.push(SqlScanHit {
                            path: path.clone(),
                            line: i + 1,
                            identifier: ident.clone(),
                            cause: (*cause).clone(),
                        });
                    }
                }
            }
            Ok(hits)
        })
        .collect();

    let mut hits = Vec::new();
    for r in per_file {
        match r {
            Ok(h) => hits.extend(h),
            Err(s) => skipped.push(s),
        }
    }
    hits.sort_by(|a, b| {
        (&a.path, a.line, &a.identifier)
            .cmp(&(&b.path, b.line, &b.identifier))
            .then_with(|| a.cause.canonical_cmp(&b.cause))
    });
    skipped.sort();
    Ok(SqlScan { hits, skipped })
}
