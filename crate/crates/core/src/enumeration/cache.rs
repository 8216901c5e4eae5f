//! On-disk store for finished enumerations. Each entry is a JSON array of
//! sequences in the wire format; `manifest.json` records the count and a
//! SHA-256 of every entry, and a hit is only returned when both match.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sequence::Sequence;

pub const CACHE_ENV: &str = "ZS_CACHE";
/// Bumped whenever enumeration output could change; part of every key.
pub const CODE_VERSION: &str = "v1";

const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
struct Entry {
    count: u64,
    sha256: String,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Cache(format!("{}: {e}", path.display()))
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$ZS_CACHE`, or `./.zs-cache`.
    pub fn from_env() -> Self {
        Cache::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".zs-cache")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn manifest(&self) -> Result<BTreeMap<String, Entry>> {
        let path = self.dir.join(MANIFEST);
        match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| io_err(&path, e)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(BTreeMap::new()),
            Err(e) => Err(io_err(&path, e)),
        }
    }

    fn load(&self, key: &str) -> Result<Option<(Vec<u8>, u64)>> {
        let Some(entry) = self.manifest()?.remove(key) else { return Ok(None) };
        let path = self.dir.join(format!("{key}.json"));
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(_) => return Ok(None),
        };
        if digest(&bytes) != entry.sha256 {
            return Ok(None);
        }
        Ok(Some((bytes, entry.count)))
    }

    fn store(&self, key: &str, bytes: Vec<u8>, count: u64) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        let path = self.dir.join(format!("{key}.json"));
        fs::write(&path, &bytes).map_err(|e| io_err(&path, e))?;
        let mut manifest = self.manifest()?;
        manifest.insert(key.to_string(), Entry { count, sha256: digest(&bytes) });
        let mpath = self.dir.join(MANIFEST);
        let text = serde_json::to_vec_pretty(&manifest).map_err(|e| io_err(&mpath, e))?;
        let tmp = self.dir.join(format!("{MANIFEST}.tmp"));
        fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &mpath).map_err(|e| io_err(&mpath, e))
    }

    pub fn load_sequences(&self, key: &str) -> Result<Option<Vec<Sequence>>> {
        let Some((bytes, count)) = self.load(key)? else { return Ok(None) };
        let seqs: Vec<Sequence> = match serde_json::from_slice(&bytes) {
            Ok(s) => s,
            Err(_) => return Ok(None),
        };
        Ok((seqs.len() as u64 == count).then_some(seqs))
    }

    pub fn store_sequences(&self, key: &str, seqs: &[Sequence]) -> Result<()> {
        let bytes = serde_json::to_vec(seqs).map_err(|e| Error::Cache(e.to_string()))?;
        self.store(key, bytes, seqs.len() as u64)
    }

    pub fn load_profile(&self, key: &str) -> Result<Option<Vec<u64>>> {
        let Some((bytes, count)) = self.load(key)? else { return Ok(None) };
        let profile: Vec<u64> = match serde_json::from_slice(&bytes) {
            Ok(p) => p,
            Err(_) => return Ok(None),
        };
        Ok((profile.len() as u64 == count).then_some(profile))
    }

    pub fn store_profile(&self, key: &str, profile: &[u64]) -> Result<()> {
        let bytes = serde_json::to_vec(profile).map_err(|e| Error::Cache(e.to_string()))?;
        self.store(key, bytes, profile.len() as u64)
    }

    /// Removes the cache directory. Returns whether anything was removed.
    pub fn purge(&self) -> Result<bool> {
        match fs::remove_dir_all(&self.dir) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
            Err(e) => Err(io_err(&self.dir, e)),
        }
    }
}
