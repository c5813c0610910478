//! Provenance metadata and deterministic writers.
//!
//! Outputs carry no timestamps or absolute paths, so a rerun with the same
//! inputs and flags is byte-identical.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const TOOL: &str = "subspec";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One input file: base name and SHA-256 of its bytes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputHash {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    pub cells: usize,
    pub interval: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<InputHash>,
    pub grid: GridMeta,
    /// Effective option values, sorted by name.
    pub options: BTreeMap<&'static str, serde_json::Value>,
}

/// A read input: its bytes and hash entry.
pub struct Input {
    pub bytes: Vec<u8>,
    pub hash: InputHash,
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    let sha256 = hex::encode(Sha256::digest(&bytes));
    Ok(Input { bytes, hash: InputHash { name, sha256 } })
}

pub fn parse_json<T: serde::de::DeserializeOwned>(input: &Input) -> Result<T, CliError> {
    serde_json::from_slice(&input.bytes).map_err(|e| CliError::Input(format!("{}: {e}", input.hash.name)))
}

/// Output directory, created on demand.
pub struct OutDir(PathBuf);

impl OutDir {
    pub fn new(path: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(path).map_err(|e| CliError::Write(format!("{}: {e}", path.display())))?;
        Ok(Self(path.to_path_buf()))
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.0.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::Write(format!("{}: {e}", path.display())))?;
        Ok(path)
    }

    /// Pretty JSON with a trailing newline. Non-finite floats become `null`.
    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Write(format!("{name}: {e}")))?;
        text.push('\n');
        self.write(name, &text)
    }

    /// CSV with `# key: value` provenance lines above the header.
    pub fn csv(&self, name: &str, meta: &Meta, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
        let mut text = String::new();
        let meta_json = serde_json::to_string(meta).map_err(|e| CliError::Write(format!("{name}: {e}")))?;
        let _ = writeln!(text, "# {TOOL} {VERSION}");
        let _ = writeln!(text, "# meta: {meta_json}");
        let _ = writeln!(text, "{}", header.join(","));
        for row in rows {
            let _ = writeln!(text, "{}", row.join(","));
        }
        self.write(name, &text)
    }
}

/// Shortest round-trip decimal form; `NaN` for failed trials.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:e}")
    }
}
