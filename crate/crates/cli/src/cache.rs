//! On-disk cache of Cayley and character tables, one JSON file per key.
//!
//! Entries are written to a temporary file in the target directory and
//! renamed into place, so readers never see a partial file. Unreadable
//! entries are reported on stderr and treated as misses.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    /// `--cache-dir`, then `TBL_CACHE_DIR`, then the user cache directory.
    pub fn from_options(flag: Option<PathBuf>, disabled: bool) -> Self {
        if disabled {
            return Self::disabled();
        }
        let dir = flag
            .or_else(|| std::env::var_os("TBL_CACHE_DIR").map(PathBuf::from))
            .or_else(|| dirs::cache_dir().map(|d| d.join("tbl")));
        Cache { dir }
    }

    fn path(&self, kind: &str, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(kind).join(format!("{key}.json")))
    }

    pub fn load<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let path = self.path(kind, key)?;
        let bytes = fs::read(&path).ok()?;
        match serde_json::from_slice(&bytes) {
            Ok(v) => Some(v),
            Err(e) => {
                self.warn_corrupt(kind, key, &e.to_string());
                None
            }
        }
    }

    pub fn warn_corrupt(&self, kind: &str, key: &str, reason: &str) {
        if let Some(path) = self.path(kind, key) {
            eprintln!(
                "warning: ignoring corrupt cache entry {}: {reason}; recomputing",
                path.display()
            );
        }
    }

    pub fn store<T: Serialize>(&self, kind: &str, key: &str, value: &T) {
        let Some(path) = self.path(kind, key) else {
            return;
        };
        if let Err(e) = write_atomically(&path, value) {
            eprintln!("warning: cannot write cache entry {}: {e}", path.display());
        }
    }
}

fn write_atomically<T: Serialize>(path: &std::path::Path, value: &T) -> std::io::Result<()> {
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, value)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
