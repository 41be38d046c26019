//! Append-only point-count cache. Counts live in a flat text file of
//! `hash n count` lines; each curve's serialization is stored once in a
//! jsonl sidecar manifest keyed by the same hash. A corrupt cache is
//! rebuilt from scratch with a warning; entries never change once written.

use std::collections::{HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::curves::Curve;
use crate::{Error, Result};

pub struct CountCache {
    counts_path: PathBuf,
    manifest_path: PathBuf,
    map: HashMap<(String, u32), u64>,
    known: HashSet<String>,
    hits: u64,
    misses: u64,
}

/// Stable cache key: SHA-256 of the canonical JSON serialization.
pub fn curve_key(c: &Curve) -> String {
    let json = serde_json::to_string(c).expect("curves serialize infallibly");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl CountCache {
    pub fn open(dir: &Path) -> Result<CountCache> {
        std::fs::create_dir_all(dir)?;
        let counts_path = dir.join("counts.txt");
        let manifest_path = dir.join("manifest.jsonl");
        let mut cache = CountCache {
            counts_path,
            manifest_path,
            map: HashMap::new(),
            known: HashSet::new(),
            hits: 0,
            misses: 0,
        };
        if let Err(e) = cache.load() {
            eprintln!("warning: corrupt cache ({e}); rebuilding from scratch");
            cache.map.clear();
            cache.known.clear();
            let _ = std::fs::remove_file(&cache.counts_path);
            let _ = std::fs::remove_file(&cache.manifest_path);
        }
        Ok(cache)
    }

    fn load(&mut self) -> Result<()> {
        if self.counts_path.exists() {
            for line in BufReader::new(File::open(&self.counts_path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let mut it = line.split_whitespace();
                let (hash, n, count) = (it.next(), it.next(), it.next());
                let parsed = match (hash, n, count, it.next()) {
                    (Some(h), Some(n), Some(c), None) => {
                        match (n.parse::<u32>(), c.parse::<u64>()) {
                            (Ok(n), Ok(c)) => Some((h.to_string(), n, c)),
                            _ => None,
                        }
                    }
                    _ => None,
                };
                match parsed {
                    Some((h, n, c)) => {
                        self.map.insert((h, n), c);
                    }
                    None => {
                        return Err(Error::Io(std::io::Error::new(
                            std::io::ErrorKind::InvalidData,
                            format!("bad counts line: {line:?}"),
                        )))
                    }
                }
            }
        }
        if self.manifest_path.exists() {
            for line in BufReader::new(File::open(&self.manifest_path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: serde_json::Value = serde_json::from_str(&line)?;
                let hash = entry
                    .get("hash")
                    .and_then(|h| h.as_str())
                    .ok_or_else(|| {
                        Error::Io(std::io::Error::new(
                            std::io::ErrorKind::InvalidData,
                            "manifest entry without hash",
                        ))
                    })?;
                self.known.insert(hash.to_string());
            }
        }
        Ok(())
    }

    pub fn get(&mut self, key: &str, n: u32) -> Option<u64> {
        let hit = self.map.get(&(key.to_string(), n)).copied();
        match hit {
            Some(_) => self.hits += 1,
            None => self.misses += 1,
        }
        hit
    }

    /// Record a count. Appends and flushes immediately; re-recording the
    /// same value is a no-op, a different value is an error.
    pub fn put(&mut self, curve: &Curve, key: &str, n: u32, count: u64) -> Result<()> {
        if let Some(&old) = self.map.get(&(key.to_string(), n)) {
            if old != count {
                return Err(Error::CacheInconsistent {
                    key: key.to_string(),
                    n,
                    old,
                    new: count,
                });
            }
            return Ok(());
        }
        if !self.known.contains(key) {
            let mut mf = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&self.manifest_path)?;
            let entry = serde_json::json!({"hash": key, "curve": curve});
            writeln!(mf, "{entry}")?;
            mf.flush()?;
            self.known.insert(key.to_string());
        }
        let mut cf = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.counts_path)?;
        writeln!(cf, "{key} {n} {count}")?;
        cf.flush()?;
        self.map.insert((key.to_string(), n), count);
        Ok(())
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
