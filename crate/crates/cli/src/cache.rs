//! Content-addressed cache for BMP reports.
//!
//! An entry is `<dir>/<sha256(key)>.json` holding the key, the payload and the
//! SHA-256 of the payload's canonical serialization. An entry is reused only when
//! both the key and the payload hash match; anything else is recomputed and rewritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

pub struct Cache {
    pub dir: PathBuf,
}

pub enum EntryState {
    Valid,
    Corrupt(String),
}

impl Cache {
    pub fn new(dir: PathBuf) -> Cache {
        Cache { dir }
    }

    fn path(&self, key: &Value) -> PathBuf {
        self.dir.join(format!("{}.json", digest(key)))
    }

    pub fn load(&self, key: &Value) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Value = serde_json::from_str(&text).ok()?;
        match check(&entry) {
            EntryState::Valid if entry["key"] == *key => Some(entry["payload"].clone()),
            _ => None,
        }
    }

    pub fn store(&self, key: &Value, payload: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = json!({ "key": key, "payload": payload, "hash": digest(payload) });
        let path = self.path(key);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, entry.to_string())?;
        fs::rename(tmp, path)
    }

    /// Every entry file with its state, sorted by file name.
    pub fn entries(&self) -> Vec<(PathBuf, Option<Value>, EntryState)> {
        let Ok(dir) = fs::read_dir(&self.dir) else {
            return Vec::new();
        };
        let mut paths: Vec<PathBuf> = dir
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        paths
            .into_iter()
            .map(|p| match fs::read_to_string(&p).ok().and_then(|t| serde_json::from_str::<Value>(&t).ok()) {
                None => (p, None, EntryState::Corrupt("unreadable".into())),
                Some(entry) => {
                    let mut state = check(&entry);
                    if matches!(state, EntryState::Valid) && !file_matches_key(&p, &entry["key"]) {
                        state = EntryState::Corrupt("file name does not match key".into());
                    }
                    (p, Some(entry["key"].clone()), state)
                }
            })
            .collect()
    }

    pub fn clear(&self) -> std::io::Result<usize> {
        let entries = self.entries();
        for (p, _, _) in &entries {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }
}

fn file_matches_key(p: &Path, key: &Value) -> bool {
    p.file_stem().and_then(|s| s.to_str()) == Some(digest(key).as_str())
}

fn check(entry: &Value) -> EntryState {
    match entry.get("hash").and_then(Value::as_str) {
        None => EntryState::Corrupt("missing hash".into()),
        Some(h) if h == digest(&entry["payload"]) => EntryState::Valid,
        Some(_) => EntryState::Corrupt("payload hash mismatch".into()),
    }
}
