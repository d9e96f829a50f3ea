use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    tool_version: &'static str,
    core_version: &'static str,
    subcommand: &'a str,
    base_seed: u64,
    config_file: &'static str,
    config_sha256: String,
    files: &'a [FileEntry],
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Output directory that records the hash of everything it writes.
pub struct OutputDir {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.display().to_string(), source })?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn put(&self, name: &str, data: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, data).map_err(|source| CliError::Output { path: path.display().to_string(), source })
    }

    /// Render a CSV into memory, write it and record its hash.
    pub fn csv(
        &mut self,
        name: &str,
        render: impl FnOnce(&mut Vec<u8>) -> rtip_core::Result<()>,
    ) -> CliResult<()> {
        let mut buf = Vec::new();
        render(&mut buf)?;
        self.put(name, &buf)?;
        eprintln!("wrote {} ({} bytes)", self.dir.join(name).display(), buf.len());
        self.files.push(FileEntry { name: name.to_string(), sha256: sha256_hex(&buf), bytes: buf.len() });
        Ok(())
    }

    /// Write `effective_config.json` and `manifest.json`.
    pub fn finish(mut self, subcommand: &str, base_seed: u64, config: &impl Serialize) -> CliResult<()> {
        let mut cfg = serde_json::to_vec_pretty(config).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.push(b'\n');
        self.put("effective_config.json", &cfg)?;
        self.files.sort_by(|a, b| a.name.cmp(&b.name));
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            core_version: rtip_core::VERSION,
            subcommand,
            base_seed,
            config_file: "effective_config.json",
            config_sha256: sha256_hex(&cfg),
            files: &self.files,
        };
        let mut text = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Config(e.to_string()))?;
        text.push(b'\n');
        self.put("manifest.json", &text)
    }
}
