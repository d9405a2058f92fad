//! Output directory with a manifest of every file written.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Serialize)]
struct Entry {
    name: String,
    sha256: String,
    /// Peak `|W|` a heatmap was normalised by.
    #[serde(skip_serializing_if = "Option::is_none")]
    peak: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Versions {
    swdl_core: &'static str,
    swdl_cli: &'static str,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_sha256: String,
    versions: Versions,
    heatmap_normalization: &'static str,
    config: &'a RunConfig,
    files: &'a [Entry],
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Hash of the resolved configuration's JSON form.
pub fn config_hash(config: &RunConfig) -> String {
    sha256_hex(serde_json::to_string(config).expect("config serializes").as_bytes())
}

pub struct Output {
    dir: PathBuf,
    files: Vec<Entry>,
}

impl Output {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Output { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn put(&mut self, name: &str, bytes: Vec<u8>, peak: Option<f64>) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.files.push(Entry { name: name.to_string(), sha256: sha256_hex(&bytes), peak });
        Ok(())
    }

    pub fn write<F>(&mut self, name: &str, fill: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> swdl_core::Result<()>,
    {
        let mut buf = Vec::new();
        fill(&mut buf)?;
        self.put(name, buf, None)
    }

    /// Writes a heatmap produced by `fill`, which returns its peak.
    pub fn write_heatmap<F>(&mut self, name: &str, fill: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> swdl_core::Result<f64>,
    {
        let mut buf = Vec::new();
        let peak = fill(&mut buf)?;
        self.put(name, buf, Some(peak))
    }

    pub fn finish(self, command: &str, config: &RunConfig) -> Result<(), CliError> {
        let manifest = Manifest {
            command,
            config_sha256: config_hash(config),
            versions: Versions { swdl_core: swdl_core::VERSION, swdl_cli: env!("CARGO_PKG_VERSION") },
            heatmap_normalization: "per-file peak",
            config,
            files: &self.files,
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        let path = self.dir.join("manifest.json");
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

/// `key,value` rows.
pub fn key_values(buf: &mut Vec<u8>, rows: &[(&str, String)]) -> swdl_core::Result<()> {
    use std::io::Write;
    writeln!(buf, "key,value")?;
    for (k, v) in rows {
        writeln!(buf, "{k},{v}")?;
    }
    Ok(())
}
