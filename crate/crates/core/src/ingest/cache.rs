//! On-disk document cache: one JSON file per URL, named by its SHA-256.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::PolicyDocument;
use crate::corpus::write_atomic;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O failure at {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt cache entry {path}: {source}")]
    Corrupt {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone)]
pub struct PolicyCache {
    dir: PathBuf,
}

impl PolicyCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{}.json", hex::encode(digest)))
    }

    pub fn get(&self, key: &str) -> Result<Option<PolicyDocument>, CacheError> {
        let path = self.path_for(key);
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(CacheError::IoFailure { path, source }),
        };
        serde_json::from_slice(&bytes).map(Some).map_err(|source| CacheError::Corrupt { path, source })
    }

    /// Atomic replace; the last writer wins.
    pub fn put(&self, key: &str, doc: &PolicyDocument) -> Result<(), CacheError> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|source| CacheError::IoFailure { path: self.dir.clone(), source })?;
        let path = self.path_for(key);
        let mut json = serde_json::to_vec_pretty(doc).expect("document serializes");
        json.push(b'\n');
        write_atomic(&path, &json).map_err(|source| CacheError::IoFailure { path, source })
    }
}
