//! Run manifests: the metadata needed to reproduce a run byte for byte.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Written as `manifest.json` next to the run outputs. Re-running with an
/// identical manifest (same config hash, seeds, and tool version) reproduces
/// every listed file bit for bit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub tool_version: String,
    /// File names written into the output directory, sorted.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(config_hash: String, seeds: Vec<u64>, mut outputs: Vec<String>) -> Self {
        outputs.sort();
        RunManifest {
            config_hash,
            seeds,
            tool_version: TOOL_VERSION.to_string(),
            outputs,
        }
    }
}

/// Serializes `value` as pretty JSON with a trailing newline.
pub fn to_json_text(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("harness values serialize");
    text.push('\n');
    text
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
    Ok(path)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let raw = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&raw).map_err(|e| {
        HarnessError::config(
            format!("{}:{}", path.display(), e.line().max(1)),
            format!("invalid JSON: {e}"),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_sorts_outputs_and_roundtrips() {
        let m = RunManifest::new(
            "abc".into(),
            vec![1, 2],
            vec!["z.csv".into(), "a.csv".into()],
        );
        assert_eq!(m.outputs, vec!["a.csv".to_string(), "z.csv".to_string()]);
        let dir = tempfile::tempdir().unwrap();
        write_text(dir.path(), "manifest.json", &to_json_text(&m)).unwrap();
        let back: RunManifest = read_json(&dir.path().join("manifest.json")).unwrap();
        assert_eq!(back.config_hash, "abc");
        assert_eq!(back.seeds, vec![1, 2]);
    }
}
