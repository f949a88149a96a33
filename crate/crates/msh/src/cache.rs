//! Persistent elimination cache: one JSON file per (boundary-map spec,
//! result kind) pair, content-addressed by a SHA-256 of the key with the
//! tool version folded in, so entries written by older builds are simply
//! never looked up. Writes go to a temporary file first and are renamed into
//! place, which keeps concurrent writers from ever exposing a torn entry.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};

use msh_core::session::{CacheKey, RankStore};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// The stored form of one cache entry. The key is embedded so a lookup can
/// reject a file that does not actually describe the requested computation
/// (a hash collision or a manually edited file).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    value: u64,
}

/// A directory of cached elimination results, usable as a [`RankStore`]
/// behind a computation session.
///
/// The cache is strictly an optimization: every failure path (unreadable
/// directory, malformed file, failed write) degrades to recomputation. The
/// first write failure prints a warning to the error stream and disables
/// further writes for the life of the handle.
pub struct DiskCache {
    dir: PathBuf,
    version: String,
    enabled: AtomicBool,
}

impl DiskCache {
    /// Opens (creating if necessary) a cache directory.
    ///
    /// # Arguments
    /// * `dir` - directory that holds the entry files.
    /// * `version` - tool version folded into every key hash; bumping it
    ///   invalidates all prior entries without touching them.
    ///
    /// # Returns
    /// A handle that is disabled from the start (with a warning on the error
    /// stream) when the directory cannot be created.
    pub fn open(dir: &Path, version: &str) -> DiskCache {
        let enabled = match fs::create_dir_all(dir) {
            Ok(()) => true,
            Err(err) => {
                eprintln!(
                    "warning: cache disabled: cannot create {}: {err}",
                    dir.display()
                );
                false
            }
        };
        DiskCache {
            dir: dir.to_path_buf(),
            version: version.to_string(),
            enabled: AtomicBool::new(enabled),
        }
    }

    /// Whether the cache is still accepting reads and writes.
    pub fn is_enabled(&self) -> bool {
        self.enabled.load(Ordering::Relaxed)
    }

    fn entry_path(&self, key: &CacheKey) -> PathBuf {
        let encoded = serde_json::to_string(key).expect("cache keys are plain data");
        let mut hasher = Sha256::new();
        hasher.update(self.version.as_bytes());
        hasher.update(b"|");
        hasher.update(encoded.as_bytes());
        let digest = hasher.finalize();
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{hex}.json"))
    }

    fn disable(&self, context: &str, err: &std::io::Error) {
        if self.enabled.swap(false, Ordering::Relaxed) {
            eprintln!("warning: cache disabled: {context}: {err}");
        }
    }
}

impl RankStore for DiskCache {
    fn get(&self, key: &CacheKey) -> Option<u64> {
        if !self.is_enabled() {
            return None;
        }
        let text = fs::read_to_string(self.entry_path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        // A file that parses but describes a different computation is
        // treated as a miss rather than trusted.
        (entry.key == *key).then_some(entry.value)
    }

    fn put(&self, key: &CacheKey, value: u64) {
        if !self.is_enabled() {
            return;
        }
        let path = self.entry_path(key);
        let entry = Entry { key: *key, value };
        let body = serde_json::to_vec(&entry).expect("cache entries are plain data");
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        if let Err(err) = fs::write(&tmp, &body) {
            self.disable("cannot write entry", &err);
            return;
        }
        if let Err(err) = fs::rename(&tmp, &path) {
            let _ = fs::remove_file(&tmp);
            self.disable("cannot publish entry", &err);
        }
    }
}
