//! Result cache: one document per n per kind, `<kind>_<n>.json`, written
//! atomically (temp file + rename) so concurrent sweep workers never leave a
//! torn file behind.

use std::fs;
use std::path::{Path, PathBuf};

use classpoly::construct::PolyKind;
use classpoly::error::{Error, Result};

use crate::doc::{kind_name, ResultDocument, SCHEMA_VERSION};

pub fn cache_path(dir: &Path, kind: PolyKind, n: i64) -> PathBuf {
    dir.join(format!("{}_{n}.json", kind_name(kind)))
}

/// None on a miss, a stale schema, or an unreadable file (all treated as
/// "recompute and overwrite").
pub fn read(dir: &Path, kind: PolyKind, n: i64) -> Option<ResultDocument> {
    let text = fs::read_to_string(cache_path(dir, kind, n)).ok()?;
    let doc: ResultDocument = serde_json::from_str(&text).ok()?;
    (doc.schema_version == SCHEMA_VERSION && doc.n == n && doc.kind == kind_name(kind))
        .then_some(doc)
}

pub fn write(dir: &Path, doc: &ResultDocument) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Dataset(format!("cache write failed: {e}"));
    fs::create_dir_all(dir).map_err(io_err)?;
    let kind = doc.poly_kind()?;
    let path = cache_path(dir, kind, doc.n);
    let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
    let body = serde_json::to_string_pretty(doc).map_err(|e| Error::Dataset(e.to_string()))?;
    fs::write(&tmp, body).map_err(io_err)?;
    fs::rename(&tmp, &path).map_err(io_err)?;
    Ok(())
}
