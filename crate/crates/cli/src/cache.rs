//! Content-addressed result store. Keys hash the command, its normalized
//! parameters and the artifact version; entries from another version are
//! treated as absent.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_DIR_VAR: &str = "KR_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub version: String,
    pub created: u64,
    pub value: Value,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

/// `KR_CACHE_DIR`, then `$XDG_CACHE_HOME/kr`, then `~/.cache/kr`.
pub fn default_dir() -> PathBuf {
    if let Some(d) = std::env::var_os(CACHE_DIR_VAR) {
        return PathBuf::from(d);
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(d).join("kr");
    }
    match std::env::var_os("HOME") {
        Some(h) => PathBuf::from(h).join(".cache").join("kr"),
        None => std::env::temp_dir().join("kr-cache"),
    }
}

fn is_key(s: &str) -> bool {
    s.len() == 64 && s.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase())
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self::with_version(dir, ARTIFACT_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: &str) -> Self {
        Cache { dir: dir.into(), version: version.to_string() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the canonical JSON of `(command, params, version)`.
    pub fn key(&self, command: &str, params: &Value) -> String {
        let canonical = serde_json::json!({
            "command": command,
            "params": params,
            "version": self.version,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Result<Option<Value>, CliError> {
        if !is_key(key) {
            return Err(CliError::Input(format!("not a cache key: {key}")));
        }
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(entry) if entry.version == self.version && entry.key == key => Ok(Some(entry.value)),
            _ => {
                let _ = fs::remove_file(&path);
                Ok(None)
            }
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn put(&self, key: &str, value: &Value) -> Result<(), CliError> {
        if !is_key(key) {
            return Err(CliError::Input(format!("not a cache key: {key}")));
        }
        fs::create_dir_all(&self.dir)?;
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let entry = CacheEntry { key: key.to_string(), version: self.version.clone(), created, value: value.clone() };
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(&entry)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    /// Removes every entry; returns how many files were deleted.
    pub fn clear(&self) -> Result<usize, CliError> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e.into()),
        };
        let mut n = 0;
        for e in entries {
            let path = e?.path();
            let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
            if name.ends_with(".json") || name.ends_with(".tmp") {
                fs::remove_file(&path)?;
                n += 1;
            }
        }
        Ok(n)
    }
}
