//! Append-only JSON-lines cache of solver results, keyed by schema version,
//! arrangement hash and multiplicity.
//!
//! Values are deterministic functions of the key, so concurrent writers and
//! last-write-wins merging are both safe.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dermod::ExponentResult;
use crate::lattice::Multiplicity;
use crate::poly::{Arrangement, Derivation};

pub const CACHE_SCHEMA: u32 = 1;
pub const CACHE_ENV: &str = "ML_CACHE_DIR";
const CACHE_FILE: &str = "exponents.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema: u32,
    pub arrangement: String,
    pub mu: Multiplicity,
    pub d1: usize,
    pub d2: usize,
    pub delta: usize,
    pub non_unique: bool,
    pub theta: Value,
}

impl CacheEntry {
    pub fn new(arrangement_hash: &str, mu: &Multiplicity, res: &ExponentResult) -> Self {
        CacheEntry {
            schema: CACHE_SCHEMA,
            arrangement: arrangement_hash.to_string(),
            mu: mu.clone(),
            d1: res.d1,
            d2: res.d2,
            delta: res.delta,
            non_unique: res.non_unique,
            theta: res.theta_min.to_json(),
        }
    }

    pub fn to_result(&self, arr: &Arrangement) -> Option<ExponentResult> {
        let theta_min = Derivation::from_json(&arr.field(), &self.theta).ok()?;
        Some(ExponentResult {
            d1: self.d1,
            d2: self.d2,
            delta: self.delta,
            theta_min,
            non_unique: self.non_unique,
        })
    }
}

/// Default location: `$ML_CACHE_DIR`, else `.ml-cache` in the working
/// directory.
pub fn default_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".ml-cache"))
}

/// In-memory view of the cache for one arrangement plus pending appends.
pub struct ResultCache {
    path: PathBuf,
    arrangement: String,
    entries: HashMap<Multiplicity, CacheEntry>,
    pending: Vec<CacheEntry>,
}

impl ResultCache {
    /// Loads the entries for `arr` from `dir`. Lines that fail to parse or
    /// carry another schema version are ignored.
    pub fn open(dir: &Path, arr: &Arrangement) -> std::io::Result<Self> {
        let path = dir.join(CACHE_FILE);
        let arrangement = arr.canonical_hash();
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(fs::File::open(&path)?);
            for line in reader.lines() {
                let line = line?;
                if let Ok(e) = serde_json::from_str::<CacheEntry>(&line) {
                    if e.schema == CACHE_SCHEMA && e.arrangement == arrangement {
                        entries.insert(e.mu.clone(), e);
                    }
                }
            }
        }
        Ok(ResultCache {
            path,
            arrangement,
            entries,
            pending: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, mu: &Multiplicity) -> Option<&CacheEntry> {
        self.entries.get(mu)
    }

    pub fn insert(&mut self, mu: &Multiplicity, res: &ExponentResult) {
        if self.entries.contains_key(mu) {
            return;
        }
        let e = CacheEntry::new(&self.arrangement, mu, res);
        self.entries.insert(mu.clone(), e.clone());
        self.pending.push(e);
    }

    /// Appends pending entries to the cache file.
    pub fn flush(&mut self) -> std::io::Result<()> {
        if self.pending.is_empty() {
            return Ok(());
        }
        if let Some(parent) = self.path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let mut buf = String::new();
        for e in self.pending.drain(..) {
            buf.push_str(&serde_json::to_string(&e).expect("json"));
            buf.push('\n');
        }
        f.write_all(buf.as_bytes())
    }
}

/// Summary of a cache directory: total lines and per-arrangement counts.
pub fn inspect(dir: &Path) -> std::io::Result<(usize, Vec<(String, usize)>)> {
    let path = dir.join(CACHE_FILE);
    if !path.exists() {
        return Ok((0, Vec::new()));
    }
    let mut counts: HashMap<String, usize> = HashMap::new();
    let mut lines = 0;
    for line in BufReader::new(fs::File::open(&path)?).lines() {
        let line = line?;
        lines += 1;
        if let Ok(e) = serde_json::from_str::<CacheEntry>(&line) {
            *counts.entry(e.arrangement).or_default() += 1;
        }
    }
    let mut counts: Vec<_> = counts.into_iter().collect();
    counts.sort();
    Ok((lines, counts))
}

pub fn clear(dir: &Path) -> std::io::Result<()> {
    let path = dir.join(CACHE_FILE);
    if path.exists() {
        fs::remove_file(path)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dermod::exponents;

    #[test]
    fn entries_survive_a_reload() {
        let dir = tempfile::tempdir().unwrap();
        let arr = Arrangement::from_int_pairs(&[(1, 0), (0, 1), (1, 1), (1, -1)]).unwrap();
        let mu = Multiplicity::new(vec![1, 1, 1, 1]);
        let res = exponents(&arr, &mu).unwrap();
        let mut cache = ResultCache::open(dir.path(), &arr).unwrap();
        assert!(cache.get(&mu).is_none());
        cache.insert(&mu, &res);
        cache.insert(&mu, &res);
        cache.flush().unwrap();
        let reloaded = ResultCache::open(dir.path(), &arr).unwrap();
        assert_eq!(reloaded.len(), 1);
        assert_eq!(reloaded.get(&mu).unwrap().to_result(&arr), Some(res));
        let other = Arrangement::from_int_pairs(&[(1, 0), (0, 1)]).unwrap();
        assert!(ResultCache::open(dir.path(), &other).unwrap().is_empty());
        assert_eq!(inspect(dir.path()).unwrap().0, 1);
        clear(dir.path()).unwrap();
        assert_eq!(inspect(dir.path()).unwrap().0, 0);
    }
}
