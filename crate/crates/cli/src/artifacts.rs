use lfn_core::{LfnError, Result};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn io_err(path: &Path, e: std::io::Error) -> LfnError {
    LfnError::Io(format!("{}: {e}", path.display()))
}

/// Checksum of an input file, for the run manifest.
pub fn input_digest(path: &Path) -> Result<Value> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    Ok(json!({ "path": path.display().to_string(), "sha256": sha256_hex(&bytes) }))
}

/// Output directory that records a checksum for every file written to it.
pub struct Artifacts {
    dir: PathBuf,
    written: BTreeMap<String, String>,
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: BTreeMap::new(),
        })
    }

    pub fn write(&mut self, name: &str, fill: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        fill(&mut buf)?;
        let path = self.dir.join(name);
        fs::write(&path, &buf).map_err(|e| io_err(&path, e))?;
        self.written.insert(name.to_string(), sha256_hex(&buf));
        Ok(())
    }

    pub fn write_json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, |buf| lfn_core::export::write_json(value, buf))
    }

    /// Writes `run.json`: the command, every effective setting, the inputs and
    /// the checksums of all artifacts written so far.
    pub fn finish(mut self, command: &str, settings: Map<String, Value>, inputs: Map<String, Value>) -> Result<()> {
        let run = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "settings": settings,
            "inputs": inputs,
            "artifacts": self.written,
        });
        let written = std::mem::take(&mut self.written);
        self.write_json("run.json", &run)?;
        self.written = written;
        Ok(())
    }
}
