//! On-disk structure-constant tables.
//!
//! A stored table carries a format version and a SHA-256 digest of the
//! algebra parameters. Loading recomputes the digest from the embedded
//! parameters and refuses files where either field disagrees.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tanglekit::element::{ParamsDoc, TableDoc};
use tanglekit::engine::AlgebraKind;
use tanglekit::StructureTable;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("corrupt table {path}: {reason}")]
    CorruptTable { path: PathBuf, reason: String },
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Serialize, Deserialize)]
struct StoredTable {
    format_version: u32,
    param_hash: String,
    table: TableDoc,
}

fn param_text(kind: &AlgebraKind) -> String {
    let params = serde_json::to_string(&ParamsDoc::of(kind)).expect("scalars serialize");
    format!("{}|{}|{}", kind.family().name(), kind.rank(), params)
}

/// Hex SHA-256 of the family, rank and loop parameters.
pub fn param_hash(kind: &AlgebraKind) -> String {
    hex::encode(Sha256::digest(param_text(kind).as_bytes()))
}

/// File name used for `kind` inside a cache directory.
pub fn table_file_name(kind: &AlgebraKind) -> String {
    format!("{}-{}-{}.json", kind.family().name(), kind.rank(), &param_hash(kind)[..16])
}

pub fn table_path(dir: &Path, kind: &AlgebraKind) -> PathBuf {
    dir.join(table_file_name(kind))
}

/// Writes `table` into `dir`, creating the directory if needed.
pub fn persist_table(table: &StructureTable, dir: &Path) -> Result<PathBuf, TableError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| TableError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = table_path(dir, &table.kind);
    let stored = StoredTable {
        format_version: FORMAT_VERSION,
        param_hash: param_hash(&table.kind),
        table: TableDoc::from(table),
    };
    let body = serde_json::to_string(&stored).expect("tables serialize");
    // write then rename so a concurrent reader never sees half a file
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, body).map_err(io_err(&tmp))?;
    fs::rename(&tmp, &path).map_err(io_err(&path))?;
    Ok(path)
}

pub fn load_table(path: &Path) -> Result<StructureTable, TableError> {
    let corrupt = |reason: String| TableError::CorruptTable {
        path: path.to_path_buf(),
        reason,
    };
    let body = fs::read_to_string(path).map_err(|source| TableError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let stored: StoredTable = serde_json::from_str(&body).map_err(|e| corrupt(e.to_string()))?;
    if stored.format_version != FORMAT_VERSION {
        return Err(corrupt(format!(
            "format version {} (expected {FORMAT_VERSION})",
            stored.format_version
        )));
    }
    let table = StructureTable::try_from(stored.table).map_err(|e| corrupt(e.to_string()))?;
    let actual = param_hash(&table.kind);
    if actual != stored.param_hash {
        return Err(corrupt(format!("parameter hash {} does not match {actual}", stored.param_hash)));
    }
    Ok(table)
}

/// Loads the cached table for `kind`, computing and storing it on a miss.
/// A corrupt cache entry is an error, not a silent recompute.
pub fn cached_table(kind: &AlgebraKind, dir: &Path) -> Result<StructureTable, TableError> {
    let path = table_path(dir, kind);
    if path.exists() {
        let table = load_table(&path)?;
        if table.kind != *kind {
            return Err(TableError::CorruptTable {
                path,
                reason: format!("holds {} instead of {kind}", table.kind),
            });
        }
        return Ok(table);
    }
    let table = tanglekit::structure_constants(kind);
    persist_table(&table, dir)?;
    Ok(table)
}
