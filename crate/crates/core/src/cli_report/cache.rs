//! Single-file cache of per-place results. Each line is
//! `<key> <sha256 of payload> <payload json>`; lines failing the checksum or
//! the decoder are treated as misses.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::formal_group::VerschiebungData;
use crate::gf_core::Place;
use crate::tate_local::{LocalReductionData, PlaceStore};
use crate::weierstrass::WeierstrassModel;

use super::TOOL_VERSION;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Canonical description of the base field and model.
pub fn curve_key(m: &WeierstrassModel) -> String {
    let f = m.fq();
    format!("F{}:{:?}|{}", f.q(), f.modulus(), m.render())
}

#[derive(Debug, Default)]
pub struct FileCache {
    path: Option<PathBuf>,
    entries: HashMap<String, String>,
    fresh: Mutex<Vec<(String, String)>>,
    pub rejected: usize,
    hits: Mutex<usize>,
}

impl FileCache {
    /// A cache with no backing file.
    pub fn memory() -> Self {
        FileCache::default()
    }

    pub fn open(path: &Path) -> std::io::Result<Self> {
        let mut c = FileCache {
            path: Some(path.to_path_buf()),
            ..FileCache::default()
        };
        let text = match std::fs::read(path) {
            Ok(b) => String::from_utf8_lossy(&b).into_owned(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(e),
        };
        for line in text.lines() {
            let mut it = line.splitn(3, ' ');
            match (it.next(), it.next(), it.next()) {
                (Some(k), Some(sum), Some(payload)) if sha256_hex(payload.as_bytes()) == sum => {
                    c.entries.insert(k.to_string(), payload.to_string());
                }
                _ => c.rejected += 1,
            }
        }
        Ok(c)
    }

    pub fn hits(&self) -> usize {
        *self.hits.lock().unwrap()
    }

    pub fn fresh_count(&self) -> usize {
        self.fresh.lock().unwrap().len()
    }

    fn key(kind: &str, m: &WeierstrassModel, v: &Place, extra: &str) -> String {
        let f = m.fq();
        sha256_hex(format!("{TOOL_VERSION}\n{kind}\n{}\n{}\n{extra}", curve_key(m), v.render(f)).as_bytes())
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let v = self.entries.get(key).and_then(|s| serde_json::from_str(s).ok());
        if v.is_some() {
            *self.hits.lock().unwrap() += 1;
        }
        v
    }

    fn put<T: Serialize>(&self, key: String, value: &T) {
        if self.entries.contains_key(&key) {
            return;
        }
        let payload = serde_json::to_string(value).expect("serializable");
        self.fresh.lock().unwrap().push((key, payload));
    }

    /// Appends new entries in key order.
    pub fn flush(&self) -> std::io::Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut fresh = std::mem::take(&mut *self.fresh.lock().unwrap());
        if fresh.is_empty() {
            return Ok(());
        }
        fresh.sort();
        fresh.dedup_by(|a, b| a.0 == b.0);
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        let mut buf = String::new();
        for (k, payload) in fresh {
            buf.push_str(&format!("{k} {} {payload}\n", sha256_hex(payload.as_bytes())));
        }
        f.write_all(buf.as_bytes())
    }
}

impl PlaceStore for FileCache {
    fn reduction(&self, m: &WeierstrassModel, v: &Place) -> Option<LocalReductionData> {
        self.get(&Self::key("reduction", m, v, ""))
    }
    fn put_reduction(&self, m: &WeierstrassModel, d: &LocalReductionData) {
        self.put(Self::key("reduction", m, &d.place, ""), d);
    }
    fn verschiebung(&self, m: &WeierstrassModel, v: &Place, n: usize) -> Option<VerschiebungData> {
        self.get(&Self::key("verschiebung", m, v, &n.to_string()))
    }
    fn put_verschiebung(&self, m: &WeierstrassModel, vd: &VerschiebungData) {
        self.put(Self::key("verschiebung", m, &vd.place, &vd.series_degree.to_string()), vd);
    }
}
