//! Read-through cache of intersection numbers, persisted as JSON.
//!
//! Keys are `genus|w|v` with each class replaced by the shortlex-least of
//! itself and its inverse and the pair sorted, since the number depends only
//! on the unordered pair of unoriented curves.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::hyperbolic::FuchsianRep;
use crate::intersection::{intersection_number, IntersectionError};
use crate::word::{canonical_conjugacy_form, invert, CyclicWord};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedCount {
    pub count: usize,
    pub radius_used: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    entries: BTreeMap<String, CachedCount>,
}

#[derive(Debug, Default)]
pub struct IntersectionCache {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<String, CachedCount>>,
}

fn unoriented(c: &CyclicWord, rep: &FuchsianRep) -> Result<CyclicWord, IntersectionError> {
    let inv = canonical_conjugacy_form(&invert(&c.to_word()), rep.presentation())?;
    let fwd = canonical_conjugacy_form(&c.to_word(), rep.presentation())?;
    Ok(fwd.min(inv))
}

pub fn cache_key(w: &CyclicWord, v: &CyclicWord, rep: &FuchsianRep) -> Result<String, IntersectionError> {
    let (a, b) = (unoriented(w, rep)?, unoriented(v, rep)?);
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    Ok(format!("{}|{a}|{b}", rep.genus()))
}

impl IntersectionCache {
    /// An empty cache that is never written.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Load from `path`. A missing file gives an empty cache; an unreadable
    /// or malformed one is discarded with a warning and rebuilt.
    pub fn load(path: impl AsRef<Path>) -> Self {
        let path = path.as_ref().to_path_buf();
        let entries = match fs::read_to_string(&path) {
            Ok(text) => match serde_json::from_str::<CacheFile>(&text) {
                Ok(f) if f.schema_version == SCHEMA_VERSION => f.entries,
                Ok(f) => {
                    log::warn!("cache {} has schema version {}, rebuilding", path.display(), f.schema_version);
                    BTreeMap::new()
                }
                Err(e) => {
                    log::warn!("cache {} is corrupted ({e}), rebuilding", path.display());
                    BTreeMap::new()
                }
            },
            Err(e) if e.kind() == io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => {
                log::warn!("cache {} unreadable ({e}), rebuilding", path.display());
                BTreeMap::new()
            }
        };
        IntersectionCache {
            path: Some(path),
            entries: Mutex::new(entries),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &str) -> Option<CachedCount> {
        self.entries.lock().unwrap().get(key).copied()
    }

    /// Write the cache back to its file, if it has one.
    pub fn save(&self) -> io::Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let file = CacheFile {
            schema_version: SCHEMA_VERSION,
            entries: self.entries.lock().unwrap().clone(),
        };
        let text = serde_json::to_string_pretty(&file).map_err(io::Error::other)?;
        fs::write(path, text + "\n")
    }

    /// Drop every entry for the given genus. Returns how many were removed.
    pub fn invalidate_genus(&self, genus: usize) -> usize {
        let prefix = format!("{genus}|");
        let mut entries = self.entries.lock().unwrap();
        let before = entries.len();
        entries.retain(|k, _| !k.starts_with(&prefix));
        before - entries.len()
    }

    /// `i(w, v)` from the cache, computing and storing it on a miss.
    pub fn intersection(
        &self,
        w: &CyclicWord,
        v: &CyclicWord,
        rep: &FuchsianRep,
        radius: Option<usize>,
    ) -> Result<CachedCount, IntersectionError> {
        let key = cache_key(w, v, rep)?;
        if let Some(c) = self.get(&key) {
            return Ok(c);
        }
        let r = intersection_number(w, v, rep, radius)?;
        let c = CachedCount {
            count: r.count,
            radius_used: r.radius_used,
        };
        self.entries.lock().unwrap().insert(key, c);
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filling::parse_class;
    use crate::hyperbolic::build_regular_rep;

    #[test]
    fn key_ignores_order_and_orientation() {
        let rep = build_regular_rep(2).unwrap();
        let a = parse_class("a1a2", &rep).unwrap();
        let b = parse_class("b1", &rep).unwrap();
        let ai = parse_class("A2A1", &rep).unwrap();
        assert_eq!(cache_key(&a, &b, &rep).unwrap(), cache_key(&b, &ai, &rep).unwrap());
    }

    #[test]
    fn corrupted_file_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        fs::write(&path, "{ not json").unwrap();
        let cache = IntersectionCache::load(&path);
        assert!(cache.is_empty());
        let rep = build_regular_rep(2).unwrap();
        let a = parse_class("a1", &rep).unwrap();
        let b = parse_class("b1", &rep).unwrap();
        assert_eq!(cache.intersection(&a, &b, &rep, None).unwrap().count, 1);
        cache.save().unwrap();
        let warm = IntersectionCache::load(&path);
        assert_eq!(warm.len(), 1);
        assert_eq!(warm.invalidate_genus(3), 0);
        assert_eq!(warm.invalidate_genus(2), 1);
    }
}
