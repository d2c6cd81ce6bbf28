//! On-disk result cache.
//!
//! Each record is one JSON file holding the schema version, its key, a
//! SHA-256 of the payload and the payload itself. Files are written to a
//! temporary name and renamed into place, so readers never see a partial
//! record and concurrent writers of the same key are harmless.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever a payload's meaning changes. Records carrying another
/// version are never read.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    /// A complex kind such as `lambda-prime`, or a report name such as `bss`.
    pub kind: String,
    pub s: u32,
    pub t: u32,
}

impl CacheKey {
    pub fn new(kind: impl Into<String>, s: u32, t: u32) -> Self {
        CacheKey { kind: kind.into(), s, t }
    }

    fn file_name(&self) -> String {
        format!("{}-{}-{}.json", self.kind, self.s, self.t)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema: u32,
    pub key: CacheKey,
    pub checksum: String,
    pub payload: String,
}

fn checksum(payload: &str) -> String {
    Sha256::digest(payload.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug)]
pub enum Lookup<T> {
    Hit(T),
    Miss,
    Corrupt { path: PathBuf, reason: String },
}

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
    enabled: bool,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>, enabled: bool) -> Self {
        Cache { root: root.into(), enabled }
    }

    pub fn disabled() -> Self {
        Cache { root: PathBuf::new(), enabled: false }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn dir(&self) -> PathBuf {
        self.root.join(format!("v{SCHEMA_VERSION}"))
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir().join(key.file_name())
    }

    fn read_record(path: &Path) -> Result<CacheRecord, String> {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let rec: CacheRecord = serde_json::from_str(&text).map_err(|e| format!("unreadable record: {e}"))?;
        if rec.schema != SCHEMA_VERSION {
            return Err(format!("schema {} is not {SCHEMA_VERSION}", rec.schema));
        }
        if checksum(&rec.payload) != rec.checksum {
            return Err("checksum mismatch".into());
        }
        Ok(rec)
    }

    pub fn get<T: DeserializeOwned>(&self, key: &CacheKey) -> Lookup<T> {
        if !self.enabled {
            return Lookup::Miss;
        }
        let path = self.path(key);
        if !path.exists() {
            return Lookup::Miss;
        }
        let corrupt = |reason: String| Lookup::Corrupt { path: path.clone(), reason };
        match Self::read_record(&path) {
            Err(reason) => corrupt(reason),
            Ok(rec) if rec.key != *key => corrupt("key mismatch".into()),
            Ok(rec) => match serde_json::from_str(&rec.payload) {
                Ok(v) => Lookup::Hit(v),
                Err(e) => corrupt(format!("bad payload: {e}")),
            },
        }
    }

    pub fn put<T: Serialize>(&self, key: &CacheKey, value: &T) -> io::Result<()> {
        if !self.enabled {
            return Ok(());
        }
        let dir = self.dir();
        fs::create_dir_all(&dir)?;
        let payload = serde_json::to_string(value)?;
        let rec = CacheRecord { schema: SCHEMA_VERSION, key: key.clone(), checksum: checksum(&payload), payload };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        serde_json::to_writer(&mut tmp, &rec)?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached value for `key`, computing and storing it on a miss. A corrupt
    /// record is reported on `warn` and rebuilt.
    pub fn get_or_compute<T, E>(&self, key: &CacheKey, warn: &mut dyn Write, compute: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        match self.get(key) {
            Lookup::Hit(v) => return Ok(v),
            Lookup::Miss => {}
            Lookup::Corrupt { path, reason } => {
                let _ = writeln!(warn, "cache: {} is corrupt ({reason}); rebuilding", path.display());
            }
        }
        let v = compute()?;
        if let Err(e) = self.put(key, &v) {
            let _ = writeln!(warn, "cache: could not write {}: {e}", self.path(key).display());
        }
        Ok(v)
    }

    /// Removes every record of every schema version; returns how many files
    /// were deleted.
    pub fn clear(&self) -> io::Result<usize> {
        if !self.root.exists() {
            return Ok(0);
        }
        let mut n = 0;
        for entry in fs::read_dir(&self.root)? {
            let entry = entry?;
            if entry.file_type()?.is_dir() && entry.file_name().to_string_lossy().starts_with('v') {
                n += fs::read_dir(entry.path())?.count();
                fs::remove_dir_all(entry.path())?;
            }
        }
        Ok(n)
    }

    /// Integrity of every current-schema record, sorted by file name.
    pub fn records(&self) -> io::Result<Vec<(PathBuf, Result<CacheRecord, String>)>> {
        let dir = self.dir();
        if !dir.exists() {
            return Ok(Vec::new());
        }
        let mut paths: Vec<PathBuf> = fs::read_dir(&dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<io::Result<_>>()?;
        paths.retain(|p| p.extension().is_some_and(|x| x == "json"));
        paths.sort();
        Ok(paths.into_iter().map(|p| {
            let r = Self::read_record(&p);
            (p, r)
        }).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path(), true);
        let key = CacheKey::new("lambda", 1, 2);
        assert!(matches!(cache.get::<Vec<u32>>(&key), Lookup::Miss));
        cache.put(&key, &vec![1u32, 2]).unwrap();
        assert!(matches!(cache.get::<Vec<u32>>(&key), Lookup::Hit(v) if v == vec![1, 2]));

        let path = cache.path(&key);
        let text = fs::read_to_string(&path).unwrap().replace("[1,2]", "[1,3]");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.get::<Vec<u32>>(&key), Lookup::Corrupt { .. }));

        let mut warn = Vec::new();
        let v: Result<Vec<u32>, ()> = cache.get_or_compute(&key, &mut warn, || Ok(vec![1, 2]));
        assert_eq!(v.unwrap(), vec![1, 2]);
        assert!(String::from_utf8(warn).unwrap().contains("corrupt"));
        assert!(matches!(cache.get::<Vec<u32>>(&key), Lookup::Hit(_)));
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(matches!(cache.get::<Vec<u32>>(&key), Lookup::Miss));
    }

    #[test]
    fn stale_schema_is_not_read() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path(), true);
        let key = CacheKey::new("lambda", 1, 1);
        cache.put(&key, &7u32).unwrap();
        let path = cache.path(&key);
        let text = fs::read_to_string(&path).unwrap().replace(&format!("\"schema\":{SCHEMA_VERSION}"), "\"schema\":0");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.get::<u32>(&key), Lookup::Corrupt { .. }));
    }
}
