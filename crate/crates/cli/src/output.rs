use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use rydfermi::Result;

pub const MANIFEST: &str = "manifest.json";

/// A file produced by a command, not yet written.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            contents: contents.into(),
        }
    }

    pub fn json(name: impl Into<String>, value: &impl Serialize) -> Self {
        let text = serde_json::to_string_pretty(value).expect("report types serialize");
        Self::new(name, text + "\n")
    }
}

#[derive(Debug, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub scenario: String,
    pub input_hash: String,
    pub timestamp: String,
    pub files: Vec<FileEntry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Write every artifact under `dir`, then the manifest listing them.
pub fn write(
    dir: &Path,
    prefix: &str,
    subcommand: &str,
    scenario_path: &Path,
    input: &[u8],
    artifacts: &[Artifact],
) -> Result<RunManifest> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let name = format!("{prefix}{}", a.name);
        std::fs::write(dir.join(&name), a.contents.as_bytes())?;
        files.push(FileEntry {
            name,
            bytes: a.contents.len(),
            sha256: sha256_hex(a.contents.as_bytes()),
        });
    }
    let manifest = RunManifest {
        tool: "rydfermi",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: subcommand.to_string(),
        scenario: scenario_path.display().to_string(),
        input_hash: sha256_hex(input),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        files,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    std::fs::write(dir.join(MANIFEST), text)?;
    Ok(manifest)
}
