//! Bundled datasets and their pinned digests.
//!
//! The manifest is compiled in from `data/manifest.json`, so a dataset
//! directory supplied through `MOMENTFORGE_DATA` is checked against the
//! digests this binary was built with.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::CliError;

const MANIFEST: &str = include_str!("../../../data/manifest.json");

#[derive(Clone, Debug, Deserialize)]
pub struct DatasetEntry {
    pub id: String,
    pub file: String,
    pub kind: String,
    pub sha256: String,
    pub note: String,
}

#[derive(Deserialize)]
struct Manifest {
    datasets: Vec<DatasetEntry>,
}

pub fn manifest() -> Vec<DatasetEntry> {
    serde_json::from_str::<Manifest>(MANIFEST)
        .expect("compiled-in manifest is valid JSON")
        .datasets
}

pub fn data_dir() -> PathBuf {
    match std::env::var_os("MOMENTFORGE_DATA") {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A loaded input file with its digest and, for bundled datasets, the
/// manifest entry it was checked against.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub path: PathBuf,
    pub text: String,
    pub digest: String,
    pub dataset: Option<DatasetEntry>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Loads a bundled dataset by id or file name, verifying its digest.
pub fn load_dataset(name: &str) -> Result<Loaded, CliError> {
    let entry = manifest()
        .into_iter()
        .find(|d| d.id == name || d.file == name)
        .ok_or_else(|| CliError::Input(format!("unknown dataset `{name}`")))?;
    let path = data_dir().join(&entry.file);
    let text = read(&path)?;
    let digest = sha256_hex(text.as_bytes());
    if digest != entry.sha256 {
        return Err(CliError::Digest {
            file: path.display().to_string(),
            expected: entry.sha256,
            found: digest,
        });
    }
    Ok(Loaded {
        path,
        text,
        digest,
        dataset: Some(entry),
    })
}

/// Resolves a user-supplied path: an existing file is read as is, unless it
/// lives in the dataset directory under a manifest name, in which case its
/// digest is pinned; a bare manifest name is looked up in the dataset
/// directory.
pub fn load_input(arg: &str) -> Result<Loaded, CliError> {
    let path = PathBuf::from(arg);
    if path.exists() {
        let in_data_dir = match (path.canonicalize(), data_dir().canonicalize()) {
            (Ok(p), Ok(d)) => p.parent() == Some(d.as_path()),
            _ => false,
        };
        let file_name = path.file_name().and_then(|f| f.to_str()).unwrap_or("");
        if in_data_dir && manifest().iter().any(|d| d.file == file_name) {
            return load_dataset(file_name);
        }
        let text = read(&path)?;
        let digest = sha256_hex(text.as_bytes());
        return Ok(Loaded {
            path,
            text,
            digest,
            dataset: None,
        });
    }
    if !arg.contains('/') && manifest().iter().any(|d| d.file == arg || d.id == arg) {
        return load_dataset(arg);
    }
    Err(CliError::Input(format!("cannot read {arg}: no such file")))
}

/// Checks every manifest entry of the given kinds.
pub fn verify_all(kinds: &[&str]) -> Result<Vec<Loaded>, CliError> {
    manifest()
        .iter()
        .filter(|d| kinds.contains(&d.kind.as_str()))
        .map(|d| load_dataset(&d.id))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_digests_match_checked_in_files() {
        for d in manifest() {
            let l = load_dataset(&d.id).unwrap();
            assert_eq!(l.digest, d.sha256, "{}", d.file);
        }
    }

    #[test]
    fn unknown_names_are_input_errors() {
        assert!(matches!(load_input("no-such-file.json"), Err(CliError::Input(_))));
        assert!(matches!(load_dataset("nope"), Err(CliError::Input(_))));
    }
}
