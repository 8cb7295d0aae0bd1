//! Record files. Every run writes new files named after the hash of its
//! effective config; existing files are never overwritten.

use std::fs::{self, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use wegner_core::ExperimentRecord;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::ConfigError;

pub const OUT_DIR_ENV: &str = "WEGNER_LAB_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "wegner-out";

/// First 16 hex digits of the SHA-256 of the config's TOML form.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let digest = Sha256::digest(config.to_toml().as_bytes());
    hex::encode(&digest[..8])
}

/// Creates `dir/stem.ext`, or `dir/stem-1.ext`, `dir/stem-2.ext`, ... if
/// taken, and returns the open file with its path.
pub fn create_unique(dir: &Path, stem: &str, ext: &str) -> Result<(fs::File, PathBuf), ConfigError> {
    fs::create_dir_all(dir)?;
    for n in 0u32.. {
        let name = if n == 0 {
            format!("{stem}.{ext}")
        } else {
            format!("{stem}-{n}.{ext}")
        };
        let path = dir.join(name);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(file) => return Ok((file, path)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e.into()),
        }
    }
    unreachable!("u32 suffixes exhausted")
}

pub fn encode_records(records: &[ExperimentRecord], format: OutputFormat) -> Result<Vec<u8>, ConfigError> {
    match format {
        OutputFormat::Jsonl => {
            let mut out = Vec::new();
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(|e| ConfigError::Output(e.to_string()))?;
                out.push(b'\n');
            }
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r).map_err(|e| ConfigError::Output(e.to_string()))?;
            }
            w.into_inner().map_err(|e| ConfigError::Output(e.to_string()))
        }
    }
}

pub fn write_records(
    dir: &Path,
    stem: &str,
    records: &[ExperimentRecord],
    format: OutputFormat,
) -> Result<PathBuf, ConfigError> {
    let bytes = encode_records(records, format)?;
    let (file, path) = create_unique(dir, stem, format.extension())?;
    let mut w = BufWriter::new(file);
    w.write_all(&bytes)?;
    w.flush()?;
    Ok(path)
}

pub fn write_text(dir: &Path, stem: &str, ext: &str, text: &str) -> Result<PathBuf, ConfigError> {
    let (mut file, path) = create_unique(dir, stem, ext)?;
    file.write_all(text.as_bytes())?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn never_overwrites() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_text(dir.path(), "x", "txt", "one").unwrap();
        let b = write_text(dir.path(), "x", "txt", "two").unwrap();
        assert_ne!(a, b);
        assert_eq!(fs::read_to_string(a).unwrap(), "one");
        assert!(b.ends_with("x-1.txt"));
    }

    #[test]
    fn hash_tracks_content() {
        let a = preset("diag-oracle-1d").unwrap();
        let mut b = a.clone();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.seed += 1;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 16);
    }
}
