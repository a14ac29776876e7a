use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Value};

use crate::report::{sha256_hex, SCHEMA};
use crate::TOOL_VERSION;

pub const CACHE_ENV: &str = "LHSLAB_CACHE_DIR";

/// Rendered reports on disk, keyed by a hash of the tool version, the command, its
/// canonical configuration and the input hashes.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: Some(dir.into()),
        }
    }

    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::at(d),
            _ => Cache::disabled(),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn key(command: &str, config: &Value, inputs: &Value) -> String {
        let doc = json!({
            "toolVersion": TOOL_VERSION,
            "command": command,
            "config": config,
            "inputs": inputs,
        });
        sha256_hex(doc.to_string().as_bytes())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    /// The stored report, if present and well formed. A corrupt entry is reported on stderr
    /// and treated as a miss.
    pub fn load(&self, key: &str, config_hash: &str) -> Option<String> {
        let path = self.path(key)?;
        let text = std::fs::read_to_string(&path).ok()?;
        let valid = serde_json::from_str::<Value>(&text).ok().is_some_and(|v| {
            v["schema"] == SCHEMA
                && v["toolVersion"] == TOOL_VERSION
                && v["configHash"] == config_hash
        });
        if valid {
            Some(text)
        } else {
            eprintln!("warning: ignoring corrupt cache entry {}", path.display());
            None
        }
    }

    /// Writes through a temporary file and a rename, so readers never see a partial entry.
    pub fn store(&self, key: &str, text: &str) -> std::io::Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(key)) else {
            return Ok(());
        };
        std::fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}
