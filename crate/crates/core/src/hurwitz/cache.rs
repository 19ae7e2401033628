//! JSON-lines memo of Hurwitz numbers.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use super::number::HurwitzQuery;
use super::partition::Partition;
use crate::algebra::rational::{serde_q, Q};
use crate::error::Result;

pub const CACHE_ENV: &str = "ORBIFROB_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    #[serde(rename = "g'")]
    pub base_genus: u32,
    pub g: i64,
    pub d: u32,
    pub profiles: Vec<Partition>,
    pub connected: bool,
}

impl CacheKey {
    pub fn of(q: &HurwitzQuery) -> Self {
        CacheKey { base_genus: q.base_genus, g: q.genus, d: q.data.degree, profiles: q.data.canonical_profiles(), connected: q.connected }
    }
}

#[derive(Serialize, Deserialize)]
struct Record {
    #[serde(flatten)]
    key: CacheKey,
    #[serde(with = "serde_q")]
    value: Q,
}

/// On-disk cache. Reads go to an in-memory map, writes append one line under a lock.
#[derive(Debug)]
pub struct HurwitzCache {
    path: PathBuf,
    map: RwLock<HashMap<CacheKey, Q>>,
    writer: Mutex<()>,
}

impl HurwitzCache {
    /// Loads whatever parses; bad lines are reported on stderr and skipped.
    pub fn open(path: PathBuf) -> Self {
        let mut map = HashMap::new();
        if let Ok(f) = fs::File::open(&path) {
            let mut bad = 0usize;
            for line in BufReader::new(f).lines() {
                let Ok(line) = line else {
                    bad += 1;
                    continue;
                };
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<Record>(&line) {
                    Ok(r) => {
                        map.insert(r.key, r.value);
                    }
                    Err(_) => bad += 1,
                }
            }
            if bad > 0 {
                eprintln!("warning: ignored {bad} corrupt line(s) in Hurwitz cache {}", path.display());
            }
        }
        HurwitzCache { path, map: RwLock::new(map), writer: Mutex::new(()) }
    }

    /// `$ORBIFROB_CACHE` if set, otherwise `fallback`.
    pub fn default_path(fallback: &Path) -> PathBuf {
        std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| fallback.to_path_buf())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, q: &HurwitzQuery) -> Option<Q> {
        self.map.read().unwrap().get(&CacheKey::of(q)).cloned()
    }

    pub fn insert(&self, q: &HurwitzQuery, value: &Q) -> Result<()> {
        let key = CacheKey::of(q);
        if self.map.read().unwrap().contains_key(&key) {
            return Ok(());
        }
        let _guard = self.writer.lock().unwrap();
        let line = serde_json::to_string(&Record { key: key.clone(), value: value.clone() }).expect("record serializes");
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{line}")?;
        self.map.write().unwrap().insert(key, value.clone());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::{BranchData, HurwitzEngine};

    fn query() -> HurwitzQuery {
        HurwitzQuery::new(0, 0, BranchData::parse(4, "(2,2);(2,2);(2,2)").unwrap(), true)
    }

    #[test]
    fn roundtrip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.jsonl");
        let first = HurwitzEngine::with_cache_path(&path).hurwitz_number(&query()).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"g'\":0") && text.contains("[[2,2],[2,2],[2,2]]"), "{text}");
        let warm = HurwitzCache::open(path.clone());
        assert_eq!(warm.get(&query()), Some(first.clone()));
        fs::remove_file(&path).unwrap();
        assert_eq!(HurwitzEngine::with_cache_path(&path).hurwitz_number(&query()).unwrap(), first);
    }

    #[test]
    fn corrupt_lines_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.jsonl");
        fs::write(&path, "not json\n{\"g'\":0,\"g\":0,\"d\":2,\"profiles\":[[2],[2]],\"connected\":true,\"value\":\"1/2\"}\n").unwrap();
        let c = HurwitzCache::open(path);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn concurrent_readers() {
        let dir = tempfile::tempdir().unwrap();
        let engine = HurwitzEngine::with_cache_path(dir.path().join("h.jsonl"));
        let want = engine.hurwitz_number(&query()).unwrap();
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| assert_eq!(engine.hurwitz_number(&query()).unwrap(), want));
            }
        });
    }
}
