//! Machine-readable classification tables and the harness that re-verifies
//! every entry.
//!
//! A catalog file is JSON of the shape `{"catalog": name, "entries": [...]}`.
//! Polynomial, field and form strings use the [`crate::frontend`] grammar and
//! may mention the entry's parameters, which each instantiation fixes.

mod model;
mod report;
mod verify;

pub use model::{
    Block, Catalog, CatalogEntry, CodimPSpec, Confidence, Constraint, CubicSpec, EntryKind, Extra, FoliationSpec,
    Instantiation, IntegralTemplate, NegativeSpec, ObstructionSpec, PresentationSpec, SimpleForm,
};
pub use report::{CheckResult, EntryReport, EntryStatus, InstanceReport, Variant, VerificationReport};
pub use verify::{run_all, verify_entry, verify_negative};

use std::path::{Path, PathBuf};

use crate::frontend::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}, column {col}: {msg}")]
    Json { path: PathBuf, line: usize, col: usize, msg: String },
    #[error("entry {id}: {what}: {source}")]
    Parse {
        id: String,
        what: String,
        #[source]
        source: ParseError,
    },
    #[error("entry {id}: instantiation {values} violates '{constraint}'")]
    Constraint { id: String, constraint: String, values: String },
    #[error("entry {id}: {msg}")]
    Invalid { id: String, msg: String },
    #[error("entry id {0} appears more than once")]
    DuplicateId(String),
}

/// Catalog directory: `LFOLIATE_CATALOG_DIR` if set, else the bundled one.
pub fn catalog_dir() -> PathBuf {
    match std::env::var_os("LFOLIATE_CATALOG_DIR") {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => bundled_catalog_dir(),
    }
}

pub fn bundled_catalog_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("catalogs")
}

/// Loads and validates one catalog file. An empty file is an empty catalog.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io { path: path.into(), source })?;
    let fallback = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    model::parse_catalog(&text, &fallback).map_err(|e| match e {
        model::LoadError::Json(e) => {
            CatalogError::Json { path: path.into(), line: e.line(), col: e.column(), msg: e.to_string() }
        }
        model::LoadError::Catalog(e) => e,
    })
}

/// Loads every `*.cat` file of a directory in file-name order and checks
/// that entry ids are unique across them.
pub fn load_dir(dir: impl AsRef<Path>) -> Result<Vec<Catalog>, CatalogError> {
    let dir = dir.as_ref();
    let rd = std::fs::read_dir(dir).map_err(|source| CatalogError::Io { path: dir.into(), source })?;
    let mut files: Vec<PathBuf> = Vec::new();
    for ent in rd {
        let p = ent.map_err(|source| CatalogError::Io { path: dir.into(), source })?.path();
        if p.extension().is_some_and(|e| e == "cat") {
            files.push(p);
        }
    }
    files.sort();
    let cats = files.iter().map(load_catalog).collect::<Result<Vec<_>, _>>()?;
    let mut seen = std::collections::BTreeSet::new();
    for e in cats.iter().flat_map(|c| &c.entries) {
        if !seen.insert(e.id.as_str()) {
            return Err(CatalogError::DuplicateId(e.id.clone()));
        }
    }
    Ok(cats)
}
