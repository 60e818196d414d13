//! Long-format plot data assembled from completed experiment runs.
//!
//! Each run directory contributes every numeric CSV listed in its manifest.
//! Series names carry a config-hash prefix, so runs of different experiments
//! (or the same experiment under different parameters) stay distinguishable
//! after merging.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::config::{short_hash, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::manifest::{read_json, RunManifest};

/// One loaded run: its directory, config, and manifest.
struct LoadedRun {
    dir: PathBuf,
    config: ExperimentConfig,
    manifest: RunManifest,
}

fn load_run(dir: &Path) -> Result<LoadedRun> {
    let manifest_path = dir.join("manifest.json");
    if !manifest_path.is_file() {
        return Err(HarnessError::config(
            dir.display().to_string(),
            "not an experiment run directory (missing manifest.json)",
        ));
    }
    let manifest: RunManifest = read_json(&manifest_path)?;
    let config: ExperimentConfig = read_json(&dir.join("config.json"))?;
    Ok(LoadedRun {
        dir: dir.to_path_buf(),
        config,
        manifest,
    })
}

/// Merges the CSV artifacts of the given run directories into one
/// long-format table with columns `experiment,series,x,y`.
///
/// The first column of each source CSV becomes `x`; every further column
/// becomes its own series named `<hash8>:<file stem>.<column>`. Two runs of
/// the same experiment must agree on the column layout of a same-named CSV,
/// otherwise the merge fails with a schema error.
pub fn emit_plotdata(dirs: &[PathBuf]) -> Result<String> {
    let mut runs = Vec::new();
    for dir in dirs {
        runs.push(load_run(dir)?);
    }
    // Deterministic output order regardless of argument order.
    runs.sort_by(|a, b| {
        (a.manifest.config_hash.as_str(), a.dir.as_path())
            .cmp(&(b.manifest.config_hash.as_str(), b.dir.as_path()))
    });

    let mut out = String::from("experiment,series,x,y\n");
    let mut schemas: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for run in &runs {
        let experiment = run.config.experiment.name();
        let hash8 = short_hash(&run.manifest.config_hash);
        for output in &run.manifest.outputs {
            if !output.ends_with(".csv") {
                continue;
            }
            let path = run.dir.join(output);
            let text =
                std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
            let label = path.display().to_string();
            let table = crate::csvfmt::parse_numeric_csv(&label, &text)?;
            let stem = output.trim_end_matches(".csv").to_string();
            let key = (experiment.to_string(), stem.clone());
            match schemas.get(&key) {
                None => {
                    schemas.insert(key, table.columns.clone());
                }
                Some(expected) if *expected == table.columns => {}
                Some(expected) => {
                    return Err(HarnessError::Schema {
                        path: label,
                        reason: format!(
                            "columns [{}] do not match [{}] seen earlier for {experiment}/{stem}",
                            table.columns.join(", "),
                            expected.join(", ")
                        ),
                    });
                }
            }
            for row in &table.rows {
                let x = row[0];
                for (j, &y) in row.iter().enumerate().skip(1) {
                    out.push_str(&format!(
                        "{experiment},{hash8}:{stem}.{col},{x},{y}\n",
                        col = table.columns[j]
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_runs_yields_the_bare_header() {
        assert_eq!(emit_plotdata(&[]).unwrap(), "experiment,series,x,y\n");
    }

    #[test]
    fn missing_manifest_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = emit_plotdata(&[dir.path().to_path_buf()]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
